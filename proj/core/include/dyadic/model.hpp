#pragma once

#include <utility>
#include <vector>

#include "dyadic/errors.hpp"

namespace dyadic {

/// State of an N-mode truncation. Entry i holds the amplitude of mode
/// n = i+1 (mode numbers are 1-based throughout the API, as usual for
/// shell models). The closure conventions u_0 = 0 and u_{N+1} = 0 are
/// hard-wired.
using ShellVector = std::vector<double>;

/// Model parameters (lambda, beta), lambda > 1, beta > 0.
class ModelParams {
public:
    ModelParams(double lambda, double beta);

    double lambda() const noexcept { return lambda_; }
    double beta() const noexcept { return beta_; }

    /// varkappa = lambda^beta, the coupling base of the inviscid system.
    double kappa() const noexcept { return kappa_; }

    /// u = lambda^(2 beta - 6), the parameter of the stationary recurrence.
    /// u < 1, = 1, > 1 correspond to beta < 3, = 3, > 3.
    double u() const noexcept { return u_; }

    /// lambda^(2n), the dissipation coefficient of mode n.
    double dissip_coeff(int n) const;
    /// lambda^(beta n), the convection coefficient of mode n.
    double conv_coeff(int n) const;
    /// lambda^((2-beta) n), the decay envelope scale of mode n.
    double envelope_scale(int n) const;

private:
    double lambda_;
    double beta_;
    double kappa_;
    double u_;
};

/// Closed-form constants attached to (lambda, beta).
struct PaperConstants {
    double eps1;        ///< (lambda^2 + lambda^(beta-1))^-1, strong-uniqueness envelope
    double eps2_max;    ///< lambda^-2, largest admissible lower-bound amplitude
    double eps3_max;    ///< (lambda^2 + lambda^(2 beta - 4))^-1, largest admissible envelope amplitude
    double eps_init;    ///< min(eps1, eps3_max), initial-data smallness threshold
    double c1;          ///< min(1/(2 lambda^2), 1/(64 lambda^(2 beta)))
    double c2;          ///< (4(3+c1)/(3 c1)) max(1/lambda^2, 1/(2 lambda^(2 beta)))
    double c3;          ///< c2 (1 - lambda^(-2 beta))^-1
    double kappa_rate;  ///< 1/2 + sqrt(1/4 + 1/u), fast rate of the backward recurrence
    double nu_rate;     ///< (1 + sqrt(1 + 8/u))/4, slow rate of the backward recurrence
};

PaperConstants compute_constants(const ModelParams& params);

/// d u_n/dt for the viscous system:
///   -lambda^(2n) u_n + lambda^(beta n) u_{n-1}^2 - lambda^(beta(n+1)) u_n u_{n+1}
ShellVector rhs_viscous(const ModelParams& params, const ShellVector& state);

/// d u_n/dt for the inviscid system:
///   kappa^n u_{n-1}^2 - kappa^(n+1) u_n u_{n+1}
ShellVector rhs_inviscid(const ModelParams& params, const ShellVector& state);

/// Residuals of the stationary system
///   lambda^(2n) a_n - lambda^(beta n) a_{n-1}^2 + lambda^(beta(n+1)) a_n a_{n+1} = 0
/// for n = 1..N-1; the last mode is excluded since a_{N+1} is unknown.
/// The relative residual divides by the largest magnitude among the three
/// terms, or reports 0 when all terms vanish.
struct StationaryResidual {
    std::vector<double> absolute;  ///< r_n, n = 1..N-1
    std::vector<double> relative;
    double max_absolute = 0.0;
    double max_relative = 0.0;
};

StationaryResidual stationary_residual(const ModelParams& params, const ShellVector& a);

/// (sum u_n^2, sum lambda^(2n) u_n^2): energy and instantaneous dissipation rate.
std::pair<double, double> energy_and_dissipation(const ModelParams& params,
                                                 const ShellVector& state);

/// Partial sums E_n = sum_{k<=n} u_k^2, n = 1..N.
std::vector<double> partial_energies(const ShellVector& state);

double l2_norm(const ShellVector& state);

void require_finite(const ShellVector& state, const char* where);

}  // namespace dyadic
