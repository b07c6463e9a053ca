#include "dyadic/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadic {

ShellVector SelfSimilarSolution::analytic_state(double t) const {
    if (!(t < blowup_time))
        throw HypothesisError("analytic_state: time at or past the blow-up time");
    ShellVector u(profile.size());
    const double scale = 1.0 / (1.0 - t);
    for (std::size_t i = 0; i < profile.size(); ++i) u[i] = profile[i] * scale;
    return u;
}

double SelfSimilarSolution::analytic_norm(double t) const {
    if (!(t < blowup_time))
        throw HypothesisError("analytic_norm: time at or past the blow-up time");
    return l2_norm(profile) / (1.0 - t);
}

SelfSimilarSolution build_selfsimilar(const ModelParams& params, int prefix_len) {
    if (!(params.kappa() > 1.0))
        throw HypothesisError("build_selfsimilar: need kappa = lambda^beta > 1");

    const double kappa = params.kappa();
    ShootResult shot = shoot(kappa * kappa, prefix_len);

    SelfSimilarSolution sol{params};
    sol.kappa = kappa;
    sol.b = b_sequence_from_aux(shot.aux);
    sol.profile.resize(sol.b.size());
    for (std::size_t i = 0; i < sol.b.size(); ++i)
        sol.profile[i] = -sol.b[i] * std::pow(kappa, -(static_cast<double>(i) + 1.0));
    return sol;
}

SelfSimilarResidual analytic_residual(const SelfSimilarSolution& sol,
                                      const std::vector<double>& times) {
    SelfSimilarResidual rep;
    rep.n_samples = static_cast<int>(times.size());
    const int n_modes = static_cast<int>(sol.profile.size());
    for (double t : times) {
        if (!(t >= 0.0) || !(t < 1.0))
            throw HypothesisError("analytic_residual: times must lie in [0, 1)");
        const ShellVector u = sol.analytic_state(t);
        const ShellVector rhs = rhs_inviscid(sol.params, u);
        const double dscale = 1.0 / ((1.0 - t) * (1.0 - t));
        for (int n = 1; n < n_modes; ++n) {  // last mode excluded
            const double dudt = sol.profile[n - 1] * dscale;
            const double denom = std::max({std::abs(dudt), std::abs(rhs[n - 1]), 1e-300});
            const double rel = std::abs(dudt - rhs[n - 1]) / denom;
            if (rel > rep.max_relative) {
                rep.max_relative = rel;
                rep.worst_mode = n;
            }
        }
    }
    return rep;
}

BlowupReport verify_blowup(const SelfSimilarSolution& sol, const std::vector<double>& times,
                           const IntegratorConfig& cfg) {
    BlowupReport rep;
    double t_sim = 0.0;
    for (double t : times) {
        if (!(t >= 0.0) || !(t < 1.0))
            throw HypothesisError("verify_blowup: times must lie in [0, 1)");
        if (t <= kSelfSimilarTimeCap) t_sim = std::max(t_sim, t);
    }

    std::optional<Trajectory> traj;
    if (t_sim > 0.0) {
        IntegratorConfig run_cfg = cfg;
        run_cfg.t_end = t_sim;
        traj = integrate(sol.params, sol.profile, run_cfg, SystemKind::Inviscid);
    }

    const int n_modes = static_cast<int>(sol.profile.size());
    const int interior = std::max(0, n_modes - rep.excluded_modes);
    double prev_norm = -1.0;
    for (double t : times) {
        BlowupRow row;
        row.t = t;
        row.analytic_norm = sol.analytic_norm(t);
        if (row.analytic_norm < prev_norm) rep.norms_increasing = false;
        prev_norm = row.analytic_norm;
        if (traj && t <= traj->t_end() + 1e-15) {
            const ShellVector u = traj->at(std::min(t, traj->t_end()));
            row.simulated_norm = l2_norm(u);
            const ShellVector v = sol.analytic_state(t);
            double diff = 0.0;
            for (int i = 0; i < interior; ++i)
                diff = std::max(diff, std::abs(u[i] - v[i]));
            row.max_interior_diff = diff;
            rep.max_interior_diff = std::max(rep.max_interior_diff, diff);
        }
        rep.rows.push_back(row);
    }
    rep.trajectory = std::move(traj);
    return rep;
}

}  // namespace dyadic
