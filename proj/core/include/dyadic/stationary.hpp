#pragma once

#include <optional>
#include <vector>

#include "dyadic/model.hpp"

namespace dyadic {

/// Decay regime of the stationary recurrence, classified by u = lambda^(2 beta - 6).
enum class Regime { Subcritical, Critical, Supercritical };

/// |u - 1| below this is routed to the critical branch; a nonzero difference
/// inside the band flags the classification as numerically marginal.
inline constexpr double kRegimeMargin = 1e-12;

Regime classify_regime(double u);

/// The backward auxiliary sequence: c_0, c_1 given, and
///   c_{k+1} = sqrt(c_k (c_{k-1} - 1) / u)   while c_{k-1} > 1;
/// when c_{k-1} <= 1 the sequence stops at c_k.
struct AuxSequence {
    double u_param = 0.0;
    Regime regime = Regime::Subcritical;
    std::vector<double> c;                 ///< c_0 .. c_last
    std::optional<int> stopped_at;         ///< index of the final element, if stopped
};

/// Run the backward recurrence from (c0, c1), both > 1, for at most max_len
/// entries.
AuxSequence backward_run(double u, double c0, double c1, int max_len);

struct ShootResult {
    AuxSequence aux;
    double parameter = 0.0;       ///< the shot delta (subcritical) or A (otherwise)
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    int iterations = 0;
    bool marginal_regime = false; ///< |u - 1| < margin but u != 1
};

/// Find the free parameter of the backward recurrence by bisection so that
/// the sequence is defined until k = target_len + 1 with c_{target_len} = 1
/// to 1e-12:
///   - subcritical: c0 = 1/(1-u) - delta, c1 = 1/(1-u) - nu delta, bisect delta
///   - critical:    c0 = A, c1 = A - 1/3, bisect A
///   - supercritical: c0 = A, c1 = A u^(-1/3), bisect A
/// Throws NumericalError when no bracket exists or when the bracket collapses
/// below 1e-15 relative width before convergence (the message reports the
/// largest achievable length).
ShootResult shoot(double u, int target_len);
ShootResult shoot(const ModelParams& params, int target_len);

/// Largest target length for which shoot(u, len) converges, found by probing.
/// Measured, not hard-coded; depends on u.
int conditioning_cap(double u, int probe_limit = 400);

/// The b-sequence recovered from a shot auxiliary sequence by index reversal
/// (b_k = c_{n+2-k}); validates that the aux terminated at 1 and that the
/// forward recurrence b_{k+1} = 1 + u b_{k-1}^2 / b_k holds along the prefix.
std::vector<double> b_sequence_from_aux(const AuxSequence& aux);

struct StationarySolution {
    std::vector<double> b;       ///< b_1 .. b_K, b_2 = 1
    ShellVector a;               ///< a_n = -lambda^((2-beta) n - 2) b_n
    Regime regime = Regime::Subcritical;
    double u_param = 0.0;
    double envelope_constant = 0.0;  ///< 1/(1-u) subcritical, 1/(u^(1/3)-1) supercritical
    int prefix_length_exact = 0;
    double shoot_parameter = 0.0;
};

/// Map a shot aux sequence to a stationary solution of the physical system.
StationarySolution reverse_to_solution(const AuxSequence& aux, const ModelParams& params);

/// Convenience: shoot + reverse.
StationarySolution solve_stationary(const ModelParams& params, int target_len);

struct LimitRow {
    int target_len = 0;
    double d1 = 0.0;
    std::optional<double> increment;  ///< |d1 - previous d1|
};

struct LimitTable {
    std::vector<LimitRow> rows;
    double extrapolated_b1 = 0.0;
    bool increments_decreasing = true;
};

/// First-element convergence study across shooting depths.
LimitTable limit_study(const ModelParams& params, const std::vector<int>& lengths);

struct StationaryCheckReport {
    bool envelope_ok = true;       ///< regime envelope along the full prefix
    bool lower_ok = true;          ///< b_k >= 1 for k >= 2
    bool monotone_ok = true;       ///< subcritical/critical: b increasing
    double max_envelope_ratio = 0.0;  ///< max b_k / envelope_k
    double ratio_lo = 0.0;         ///< supercritical: min of b_n u^(-n/3) over last half
    double ratio_hi = 0.0;         ///< supercritical: max of the same
    bool ok = true;
};

StationaryCheckReport envelope_check(const StationarySolution& sol);

}  // namespace dyadic
