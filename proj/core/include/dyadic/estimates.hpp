#pragma once

#include <utility>
#include <vector>

#include "dyadic/integrator.hpp"

namespace dyadic {

struct LevelSetStats {
    int mode = 0;
    double level = 0.0;
    double measure_a = 0.0;  ///< |{t : u_n >= y >= u_{n+2}}|
    double measure_b = 0.0;  ///< |{t : u_n >= y}|
    double bound_a = 0.0;    ///< c2 |a|^2 / (y^3 lambda^(beta n) + y^2 lambda^(2n))
    double bound_b = 0.0;    ///< same with c3
    std::vector<std::pair<double, double>> intervals_b;  ///< the superlevel intervals
};

/// Measures of the level sets of mode n at level y > 0, computed from dense
/// output by root bracketing with refinement until the measure is stable to
/// 1e-8 * t_end. Requires a viscous trajectory with data nonnegative beyond
/// some M <= n, and n + 2 <= N for the measure of the two-sided set.
LevelSetStats level_set_measure(const Trajectory& traj, int n, double y);

struct CubeIntegralReport {
    int mode = 0;
    double integral_value = 0.0;  ///< int_0^T u_n^3 dt by dense-output quadrature
    double tail_bound = 0.0;      ///< |a| lambda^(-2n) E(T), a bound on the rest of [T, inf)
    double paper_bound = 0.0;     ///< 3 c3 |a|^2 lambda^(-beta n) log(lambda^((beta-2)n) |a| + 1)
    bool within_bound = false;
};

/// Finite-horizon check of the cube-integral estimate: integral + tail bound
/// against the closed-form right side. The tail bound converts the remaining
/// dissipation budget E(T) into a bound on int_T^inf u_n^3 via u_n <= |a|.
CubeIntegralReport cube_integral(const Trajectory& traj, int n);

/// int_0^T (sum_n lambda^(2(eps+1/3) beta n) u_n^2)^(3/2) dt. Diagnostic
/// only: growth across increasing N and T is the blow-up signature.
double blowup_functional(const Trajectory& traj, double eps);

struct PsiMetric {
    std::vector<double> times;
    std::vector<double> values;  ///< psi_N(t) = sum_{n<=N} 2^-n (u_n - v_n)^2
    double final_value = 0.0;
    double max_value = 0.0;
};

/// psi-metric between two trajectories with the same parameters, initial data
/// (on the compared prefix) and time span.
PsiMetric psi_metric(const Trajectory& a, const Trajectory& b, int n_cap);

/// psi-metric between a trajectory and a constant-in-time sequence (e.g. a
/// stationary solution held fixed).
PsiMetric psi_metric_constant(const Trajectory& traj, const ShellVector& fixed, int n_cap);

}  // namespace dyadic
