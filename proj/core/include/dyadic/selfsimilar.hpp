#pragma once

#include <optional>
#include <vector>

#include "dyadic/integrator.hpp"
#include "dyadic/stationary.hpp"

namespace dyadic {

/// Self-similar blow-up solution of the inviscid system:
///   u_n(t) = -b_n kappa^(-n) / (1 - t),
/// an exact solution whenever {b_n} solves the forward recurrence with
/// u = kappa^2 > 1 (supercritical branch). Every norm diverges as t -> 1.
struct SelfSimilarSolution {
    ModelParams params;
    double kappa = 0.0;
    std::vector<double> b;   ///< shot prefix, b_2 = 1
    ShellVector profile;     ///< u_n(0) = -b_n kappa^(-n)
    double blowup_time = 1.0;

    ShellVector analytic_state(double t) const;
    double analytic_norm(double t) const;  ///< l2 norm of the analytic state
};

/// Shoot the stationary recurrence with u = kappa^2 (kappa = lambda^beta > 1)
/// and assemble the blow-up profile over a prefix of the given length.
SelfSimilarSolution build_selfsimilar(const ModelParams& params, int prefix_len);

struct SelfSimilarResidual {
    double max_relative = 0.0;  ///< worst interior-mode ODE residual over the sampled times
    int worst_mode = 0;
    int n_samples = 0;
};

/// Residual of the analytic form in the inviscid system at the given times,
/// relative per mode; the last mode is excluded (its neighbor is unknown).
SelfSimilarResidual analytic_residual(const SelfSimilarSolution& sol,
                                      const std::vector<double>& times);

/// Simulated comparisons run only up to this time; past it, truncation and the
/// approach to blow-up make the Galerkin system meaningless and the analytic
/// form is used alone.
inline constexpr double kSelfSimilarTimeCap = 1.0 - 1e-3;

struct BlowupRow {
    double t = 0.0;
    double analytic_norm = 0.0;
    std::optional<double> simulated_norm;
    std::optional<double> max_interior_diff;  ///< excludes the last `excluded_modes` modes
};

struct BlowupReport {
    std::vector<BlowupRow> rows;
    int excluded_modes = 3;
    bool norms_increasing = true;  ///< analytic norm grows along the times
    double max_interior_diff = 0.0;
    std::optional<Trajectory> trajectory;  ///< the Galerkin run, when one was made
};

/// Integrate the inviscid Galerkin system from the profile and compare with
/// the analytic form at the given times (each in [0, 1)); rows past the time
/// cap carry analytic values only. The last 3 modes are excluded from the
/// comparison: the closure u_{N+1} = 0 breaks the self-similar balance there.
BlowupReport verify_blowup(const SelfSimilarSolution& sol, const std::vector<double>& times,
                           const IntegratorConfig& cfg);

}  // namespace dyadic
