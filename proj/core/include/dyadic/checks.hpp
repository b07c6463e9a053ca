#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyadic/integrator.hpp"

namespace dyadic {

enum class SignVerdict {
    NonnegativePreserved,  ///< a_n >= 0 and u_n stayed above -tol
    SingleCrossing,        ///< a_n < 0, one crossing tau_n, nonnegative after
    StaysNegative,         ///< a_n < 0 and u_n never reached zero
    Violated,              ///< observed behavior outside all of the above
};

struct ModeSignReport {
    int mode = 0;
    SignVerdict verdict = SignVerdict::NonnegativePreserved;
    std::optional<double> crossing_time;
    double worst_violation = 0.0;
};

struct SignReport {
    std::vector<ModeSignReport> modes;
    double tolerance = 0.0;
    bool all_ok = true;
};

/// Per-mode sign structure of a viscous trajectory: nonnegative data stay
/// nonnegative; negative data either stay negative or cross zero once and
/// never return. Report-only.
SignReport check_sign_structure(const Trajectory& traj);

struct LowerBoundReport {
    double eps2 = 0.0;
    int first_mode = 0;
    double tolerance = 0.0;
    int violations = 0;
    double worst_deficit = 0.0;      ///< max of (bound - u_n) - tol over samples, clamped at 0
    int corollary_violations = 0;    ///< failures of the damped-coefficient positivity
    bool ok = true;
};

/// u_n(t) >= -eps2 lambda^((2-beta) n) for n >= first_mode, plus the induced
/// positivity lambda^(2n) + lambda^(beta(n+1)) u_{n+1} >= lambda^(2n)(1 - eps2 lambda^2).
/// Requires eps2 <= lambda^-2 and initial data obeying the same bound
/// (HypothesisError otherwise).
LowerBoundReport check_lower_bound(const Trajectory& traj, double eps2, int first_mode);

struct EnvelopeReport {
    double eps3 = 0.0;
    int first_mode = 0;
    double tolerance = 0.0;
    double t_prime = 0.0;  ///< largest time with the leading mode inside the envelope
    int violations = 0;    ///< envelope failures of any mode >= first_mode on [0, t_prime]
    double worst_excess = 0.0;
    bool ok = true;
};

/// |u_n(t)| <= eps3 lambda^((2-beta) n) for n >= first_mode on [0, T'], where
/// T' is found from the single mode `first_mode` (the rest of the cone follows
/// by induction). Requires eps3 <= (lambda^2 + lambda^(2 beta - 4))^-1 and
/// admissible data.
EnvelopeReport check_envelope(const Trajectory& traj, double eps3, int first_mode);

struct ConvergenceRow {
    int n_coarse = 0;
    int n_fine = 0;
    double max_diff = 0.0;  ///< max over t and over modes <= n_coarse
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool monotone_decreasing = true;
};

/// Successive-truncation comparison: integrate the same initial data at each
/// N in n_list (data truncated or zero-padded as needed) and report the
/// uniform distance between consecutive truncations.
ConvergenceTable convergence_study(const ModelParams& params, const ShellVector& data,
                                   const std::vector<int>& n_list,
                                   const IntegratorConfig& cfg,
                                   SystemKind kind = SystemKind::Viscous);

}  // namespace dyadic
