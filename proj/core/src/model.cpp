#include "dyadic/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadic {

ModelParams::ModelParams(double lambda, double beta) : lambda_(lambda), beta_(beta) {
    if (!(lambda > 1.0) || !std::isfinite(lambda))
        throw HypothesisError("ModelParams: lambda must be finite and > 1, got " +
                              std::to_string(lambda));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw HypothesisError("ModelParams: beta must be finite and > 0, got " +
                              std::to_string(beta));
    kappa_ = std::pow(lambda, beta);
    u_ = std::pow(lambda, 2.0 * beta - 6.0);
}

double ModelParams::dissip_coeff(int n) const {
    return std::pow(lambda_, 2.0 * n);
}

double ModelParams::conv_coeff(int n) const {
    return std::pow(lambda_, beta_ * n);
}

double ModelParams::envelope_scale(int n) const {
    return std::pow(lambda_, (2.0 - beta_) * n);
}

PaperConstants compute_constants(const ModelParams& p) {
    const double la = p.lambda();
    const double be = p.beta();
    PaperConstants c{};
    c.eps1 = 1.0 / (la * la + std::pow(la, be - 1.0));
    c.eps2_max = 1.0 / (la * la);
    c.eps3_max = 1.0 / (la * la + std::pow(la, 2.0 * be - 4.0));
    c.eps_init = std::min(c.eps1, c.eps3_max);
    c.c1 = std::min(1.0 / (2.0 * la * la), 1.0 / (64.0 * std::pow(la, 2.0 * be)));
    c.c2 = (4.0 * (3.0 + c.c1) / (3.0 * c.c1)) *
           std::max(1.0 / (la * la), 1.0 / (2.0 * std::pow(la, 2.0 * be)));
    c.c3 = c.c2 / (1.0 - std::pow(la, -2.0 * be));
    const double u = p.u();
    c.kappa_rate = 0.5 + std::sqrt(0.25 + 1.0 / u);
    c.nu_rate = 0.25 * (1.0 + std::sqrt(1.0 + 8.0 / u));
    return c;
}

void require_finite(const ShellVector& state, const char* where) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!std::isfinite(state[i]))
            throw InvalidStateError(std::string(where) + ": non-finite entry at mode " +
                                    std::to_string(i + 1));
    }
}

ShellVector rhs_viscous(const ModelParams& p, const ShellVector& state) {
    require_finite(state, "rhs_viscous");
    const int n_modes = static_cast<int>(state.size());
    ShellVector out(state.size());
    for (int n = 1; n <= n_modes; ++n) {
        const double un = state[n - 1];
        const double um = (n >= 2) ? state[n - 2] : 0.0;        // u_{n-1}, u_0 = 0
        const double up = (n < n_modes) ? state[n] : 0.0;       // u_{n+1}, closure
        out[n - 1] = -p.dissip_coeff(n) * un + p.conv_coeff(n) * um * um -
                     p.conv_coeff(n + 1) * un * up;
    }
    return out;
}

ShellVector rhs_inviscid(const ModelParams& p, const ShellVector& state) {
    require_finite(state, "rhs_inviscid");
    const int n_modes = static_cast<int>(state.size());
    ShellVector out(state.size());
    for (int n = 1; n <= n_modes; ++n) {
        const double un = state[n - 1];
        const double um = (n >= 2) ? state[n - 2] : 0.0;
        const double up = (n < n_modes) ? state[n] : 0.0;
        out[n - 1] = p.conv_coeff(n) * um * um - p.conv_coeff(n + 1) * un * up;
    }
    return out;
}

StationaryResidual stationary_residual(const ModelParams& p, const ShellVector& a) {
    if (a.size() < 2)
        throw HypothesisError("stationary_residual: need at least 2 modes, got " +
                                std::to_string(a.size()));
    require_finite(a, "stationary_residual");
    const int n_modes = static_cast<int>(a.size());
    StationaryResidual res;
    res.absolute.reserve(a.size() - 1);
    res.relative.reserve(a.size() - 1);
    for (int n = 1; n <= n_modes - 1; ++n) {
        const double an = a[n - 1];
        const double am = (n >= 2) ? a[n - 2] : 0.0;
        const double ap = a[n];
        const double t1 = p.dissip_coeff(n) * an;
        const double t2 = -p.conv_coeff(n) * am * am;
        const double t3 = p.conv_coeff(n + 1) * an * ap;
        const double r = t1 + t2 + t3;
        const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        res.absolute.push_back(r);
        res.relative.push_back(scale > 0.0 ? std::abs(r) / scale : 0.0);
        res.max_absolute = std::max(res.max_absolute, std::abs(r));
        res.max_relative = std::max(res.max_relative, res.relative.back());
    }
    return res;
}

std::pair<double, double> energy_and_dissipation(const ModelParams& p,
                                                 const ShellVector& state) {
    double energy = 0.0;
    double dissip = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double sq = state[i] * state[i];
        energy += sq;
        dissip += p.dissip_coeff(static_cast<int>(i) + 1) * sq;
    }
    return {energy, dissip};
}

std::vector<double> partial_energies(const ShellVector& state) {
    std::vector<double> out(state.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        acc += state[i] * state[i];
        out[i] = acc;
    }
    return out;
}

double l2_norm(const ShellVector& state) {
    double acc = 0.0;
    for (double v : state) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace dyadic
