#include "dyadic/checks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/numerics.hpp"

namespace dyadic {

namespace {

double check_tolerance(const Trajectory& traj) {
    // separates integrator error from genuine violation
    return 1e2 * traj.config().rel_tol * l2_norm(traj.initial_state());
}

}  // namespace

SignReport check_sign_structure(const Trajectory& traj) {
    if (traj.kind() != SystemKind::Viscous)
        throw HypothesisError("check_sign_structure: viscous trajectories only");

    SignReport rep;
    rep.tolerance = check_tolerance(traj);
    const auto grid = traj.sample_grid();
    const ShellVector& a = traj.initial_state();

    for (int n = 1; n <= traj.n_modes(); ++n) {
        ModeSignReport mr;
        mr.mode = n;
        if (a[n - 1] >= 0.0) {
            mr.verdict = SignVerdict::NonnegativePreserved;
            for (double t : grid) {
                const double v = traj.mode_at(t, n);
                if (v < -rep.tolerance) {
                    mr.verdict = SignVerdict::Violated;
                    mr.worst_violation = std::max(mr.worst_violation, -v);
                }
            }
        } else {
            // locate the first time u_n leaves the negative half-line
            std::optional<double> tau;
            for (std::size_t i = 1; i < grid.size(); ++i) {
                if (traj.mode_at(grid[i], n) >= 0.0) {
                    tau = bisect_root([&](double t) { return traj.mode_at(t, n); },
                                      grid[i - 1], grid[i], 1e-12);
                    break;
                }
            }
            if (!tau) {
                mr.verdict = SignVerdict::StaysNegative;
                for (double t : grid) {
                    const double v = traj.mode_at(t, n);
                    if (v > rep.tolerance) {
                        mr.verdict = SignVerdict::Violated;
                        mr.worst_violation = std::max(mr.worst_violation, v);
                    }
                }
            } else {
                mr.verdict = SignVerdict::SingleCrossing;
                mr.crossing_time = *tau;
                for (double t : grid) {
                    const double v = traj.mode_at(t, n);
                    const double bad = (t < *tau) ? (v - rep.tolerance)
                                                  : (-v - rep.tolerance);
                    if (bad > 0.0) {
                        mr.verdict = SignVerdict::Violated;
                        mr.worst_violation = std::max(mr.worst_violation, bad);
                    }
                }
            }
        }
        if (mr.verdict == SignVerdict::Violated) rep.all_ok = false;
        rep.modes.push_back(mr);
    }
    return rep;
}

LowerBoundReport check_lower_bound(const Trajectory& traj, double eps2, int first_mode) {
    const ModelParams& p = traj.params();
    if (!(eps2 > 0.0) || eps2 > 1.0 / (p.lambda() * p.lambda()))
        throw HypothesisError("check_lower_bound: need 0 < eps2 <= lambda^-2, got " +
                              std::to_string(eps2));
    if (first_mode < 1 || first_mode > traj.n_modes())
        throw HypothesisError("check_lower_bound: first_mode out of range");

    const ShellVector& a = traj.initial_state();
    for (int n = first_mode; n <= traj.n_modes(); ++n) {
        if (a[n - 1] < -eps2 * p.envelope_scale(n) * (1.0 + 1e-12))
            throw HypothesisError("check_lower_bound: initial datum of mode " +
                                  std::to_string(n) + " below the admissible bound");
    }

    LowerBoundReport rep;
    rep.eps2 = eps2;
    rep.first_mode = first_mode;
    rep.tolerance = check_tolerance(traj);
    const auto grid = traj.sample_grid();
    const double la2 = p.lambda() * p.lambda();

    for (double t : grid) {
        const ShellVector u = traj.at(t);
        for (int n = first_mode; n <= traj.n_modes(); ++n) {
            const double bound = -eps2 * p.envelope_scale(n);
            const double deficit = bound - u[n - 1] - rep.tolerance;
            if (deficit > 0.0) {
                ++rep.violations;
                rep.worst_deficit = std::max(rep.worst_deficit, deficit);
            }
            // Galerkin closure: u_{n+1} = 0 past the last mode
            const double up = (n < traj.n_modes()) ? u[n] : 0.0;
            const double lhs = p.dissip_coeff(n) + p.conv_coeff(n + 1) * up;
            const double rhs = p.dissip_coeff(n) * (1.0 - eps2 * la2) - rep.tolerance;
            if (lhs < rhs) ++rep.corollary_violations;
        }
    }
    rep.ok = (rep.violations == 0 && rep.corollary_violations == 0);
    return rep;
}

EnvelopeReport check_envelope(const Trajectory& traj, double eps3, int first_mode) {
    const ModelParams& p = traj.params();
    const PaperConstants pc = compute_constants(p);
    if (!(eps3 > 0.0) || eps3 > pc.eps3_max * (1.0 + 1e-12))
        throw HypothesisError("check_envelope: need 0 < eps3 <= (lambda^2 + lambda^(2 beta - 4))^-1");
    if (first_mode < 1 || first_mode > traj.n_modes())
        throw HypothesisError("check_envelope: first_mode out of range");

    const ShellVector& a = traj.initial_state();
    for (int n = first_mode; n <= traj.n_modes(); ++n) {
        if (std::abs(a[n - 1]) > eps3 * p.envelope_scale(n) * (1.0 + 1e-12))
            throw HypothesisError("check_envelope: initial datum of mode " +
                                  std::to_string(n) + " outside the envelope");
    }

    EnvelopeReport rep;
    rep.eps3 = eps3;
    rep.first_mode = first_mode;
    rep.tolerance = check_tolerance(traj);
    const auto grid = traj.sample_grid();
    const double lead_bound = eps3 * p.envelope_scale(first_mode);

    // T' from the single leading mode
    rep.t_prime = traj.t_end();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(traj.mode_at(grid[i], first_mode)) > lead_bound + rep.tolerance) {
            rep.t_prime = bisect_root(
                [&](double t) {
                    return std::abs(traj.mode_at(t, first_mode)) - lead_bound - rep.tolerance;
                },
                grid[i - 1], grid[i], 1e-12);
            break;
        }
    }

    for (double t : grid) {
        if (t > rep.t_prime) break;
        const ShellVector u = traj.at(t);
        for (int n = first_mode; n <= traj.n_modes(); ++n) {
            const double excess =
                std::abs(u[n - 1]) - eps3 * p.envelope_scale(n) - rep.tolerance;
            if (excess > 0.0) {
                ++rep.violations;
                rep.worst_excess = std::max(rep.worst_excess, excess);
            }
        }
    }
    rep.ok = (rep.violations == 0);
    return rep;
}

ConvergenceTable convergence_study(const ModelParams& params, const ShellVector& data,
                                   const std::vector<int>& n_list,
                                   const IntegratorConfig& cfg, SystemKind kind) {
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw InvalidStateError("convergence_study: n_list must be increasing");

    ConvergenceTable table;
    std::vector<Trajectory> runs;
    runs.reserve(n_list.size());
    for (int n : n_list) {
        ShellVector a(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n && i < static_cast<int>(data.size()); ++i) a[i] = data[i];
        runs.push_back(integrate(params, a, cfg, kind));
    }

    const auto grid = runs.front().sample_grid();
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        ConvergenceRow row;
        row.n_coarse = n_list[i];
        row.n_fine = n_list[i + 1];
        for (double t : grid) {
            const ShellVector uc = runs[i].at(t);
            const ShellVector uf = runs[i + 1].at(t);
            for (int m = 0; m < row.n_coarse; ++m)
                row.max_diff = std::max(row.max_diff, std::abs(uc[m] - uf[m]));
        }
        if (!table.rows.empty() && row.max_diff > table.rows.back().max_diff)
            table.monotone_decreasing = false;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace dyadic
