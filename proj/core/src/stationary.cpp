#include "dyadic/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dyadic {

Regime classify_regime(double u) {
    if (u < 1.0 - kRegimeMargin) return Regime::Subcritical;
    if (u > 1.0 + kRegimeMargin) return Regime::Supercritical;
    return Regime::Critical;
}

AuxSequence backward_run(double u, double c0, double c1, int max_len) {
    if (!(u > 0.0)) throw HypothesisError("backward_run: need u > 0");
    if (!(c0 > 1.0) || !(c1 > 1.0))
        throw HypothesisError("backward_run: need c0, c1 > 1");
    if (max_len < 2) throw HypothesisError("backward_run: max_len must be >= 2");

    AuxSequence aux;
    aux.u_param = u;
    aux.regime = classify_regime(u);
    aux.c = {c0, c1};
    while (static_cast<int>(aux.c.size()) < max_len) {
        const std::size_t k = aux.c.size() - 1;  // index of the current last element
        const double prev = aux.c[k - 1];
        if (prev <= 1.0) {
            aux.stopped_at = static_cast<int>(k);
            break;
        }
        const double radicand = aux.c[k] * (prev - 1.0) / u;
        if (radicand < 0.0)
            throw NumericalError("backward_run: negative radicand at k = " +
                                 std::to_string(k + 1));
        aux.c.push_back(std::sqrt(radicand));
    }
    return aux;
}

namespace {

/// Subcritical backward run in deviation coordinates d_k = 1/(1-u) - c_k.
/// Writing fp = 1/(1-u), the step c_{k+1} = sqrt(c_k (c_{k-1} - 1)/u) becomes
///   d_{k+1} = (fp d_{k-1} + (fp-1) d_k - d_k d_{k-1})
///             / (u (fp + sqrt((fp - d_k)(fp - 1 - d_{k-1}) / u)))
/// which is free of the cancellation that otherwise destroys deep shots
/// (the shot deviation delta is of order kappa^-n).
struct DeviationRun {
    std::vector<double> d;
    bool stopped = false;  ///< d_{k-1} >= fp - 1, i.e. c_{k-1} <= 1
};

DeviationRun deviation_run(double u, double delta0, double delta1, int max_len) {
    const double fp = 1.0 / (1.0 - u);
    DeviationRun run;
    run.d = {delta0, delta1};
    while (static_cast<int>(run.d.size()) < max_len) {
        const std::size_t k = run.d.size() - 1;
        const double dprev = run.d[k - 1];
        if (dprev >= fp - 1.0) {
            run.stopped = true;
            break;
        }
        const double dk = run.d[k];
        const double num = fp * dprev + (fp - 1.0) * dk - dk * dprev;
        const double rad = (fp - dk) * (fp - 1.0 - dprev) / u;
        run.d.push_back(num / (u * (fp + std::sqrt(rad))));
    }
    return run;
}

constexpr double kShootTol = 1e-12;
constexpr double kBracketCollapse = 1e-15;

struct ShootOutcome {
    bool ok = false;
    std::string failure;
    ShootResult result;
};

/// c_{target} - 1 as a function of the shooting parameter; sequences that
/// stop before index target count as overshoot past 1.
ShootOutcome shoot_impl(double u, int target_len) {
    ShootOutcome out;
    if (target_len < 3) {
        out.failure = "target_len must be >= 3";
        return out;
    }
    const Regime regime = classify_regime(u);
    const int n = target_len;
    const int max_len = n + 2;

    auto finish = [&](double param, double lo, double hi, int iters,
                      AuxSequence aux) {
        out.ok = true;
        out.result.aux = std::move(aux);
        out.result.parameter = param;
        out.result.bracket_lo = lo;
        out.result.bracket_hi = hi;
        out.result.iterations = iters;
        out.result.marginal_regime =
            (regime == Regime::Critical && u != 1.0);
    };

    if (regime == Regime::Subcritical) {
        const double fp = 1.0 / (1.0 - u);
        const double nu = (1.0 + std::sqrt(1.0 + 8.0 / u)) / 4.0;
        const double kappa = 0.5 + std::sqrt(0.25 + 1.0 / u);

        // f(delta) = c_n - 1 = (fp - 1) - d_n, decreasing in delta
        auto eval = [&](double delta, DeviationRun* run_out) {
            DeviationRun run = deviation_run(u, delta, nu * delta, max_len);
            double f;
            if (static_cast<int>(run.d.size()) <= n)
                f = -1.0;  // died early: counts as undershoot past 1
            else
                f = (fp - 1.0) - run.d[n];
            if (run_out) *run_out = std::move(run);
            return f;
        };

        const double delta_max = 0.999 * (fp - 1.0) / nu;  // keeps c1 > 1
        double hi = std::min(delta_max,
                             0.5 * (fp - 1.0) * std::pow(kappa, -double(n)));
        if (hi <= 0.0) {
            out.failure = "shooting parameter underflow at depth " + std::to_string(n);
            return out;
        }
        double lo = 0.0;  // f(0+) = fp - 1 > 0 (fixed point never stops)
        while (eval(hi, nullptr) > 0.0) {
            lo = hi;
            if (hi >= delta_max) {
                out.failure = "no shooting bracket within the admissible delta range";
                return out;
            }
            hi = std::min(2.0 * hi, delta_max);
        }

        int iters = 0;
        while (true) {
            const double mid = 0.5 * (lo + hi);
            DeviationRun run;
            const double f = eval(mid, &run);
            ++iters;
            if (std::abs(f) <= kShootTol && !run.stopped &&
                static_cast<int>(run.d.size()) == max_len) {
                AuxSequence aux;
                aux.u_param = u;
                aux.regime = regime;
                aux.c.resize(run.d.size());
                for (std::size_t i = 0; i < run.d.size(); ++i) aux.c[i] = fp - run.d[i];
                aux.stopped_at = static_cast<int>(run.d.size()) - 1;
                finish(mid, lo, hi, iters, std::move(aux));
                return out;
            }
            if (f > 0.0)
                lo = mid;
            else
                hi = mid;
            if ((hi - lo) <= kBracketCollapse * hi) {
                out.failure = "bisection bracket collapsed at depth " + std::to_string(n);
                return out;
            }
        }
    }

    // critical and supercritical: bisect the starting height A;
    // c_n - 1 is increasing in A
    const bool critical = (regime == Regime::Critical);
    const double c1_of = critical ? -1.0 / 3.0 : 0.0;  // additive offset (critical)
    const double c1_factor = critical ? 1.0 : std::pow(u, -1.0 / 3.0);

    auto eval = [&](double a_start, AuxSequence* aux_out) {
        const double c1 = critical ? (a_start + c1_of) : (a_start * c1_factor);
        AuxSequence aux = backward_run(u, a_start, c1, max_len);
        double f;
        if (static_cast<int>(aux.c.size()) <= n)
            f = -1.0;
        else
            f = aux.c[n] - 1.0;
        if (aux_out) *aux_out = std::move(aux);
        return f;
    };

    // smallest admissible start keeping c0, c1 > 1
    const double a_floor =
        critical ? (4.0 / 3.0) : std::pow(u, 1.0 / 3.0);
    double lo = a_floor * (1.0 + 1e-9) + 1e-9;
    double hi = critical ? (n / 3.0 + 2.0)
                         : (1.0 + 1.0 / (std::cbrt(u) - 1.0)) * std::pow(u, n / 3.0) + 2.0;
    hi = std::max(hi, 2.0 * lo);
    while (eval(hi, nullptr) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300) {
            out.failure = "no shooting bracket found while expanding A";
            return out;
        }
    }
    if (eval(lo, nullptr) > 0.0) {
        out.failure = "shooting bracket lower end already overshoots";
        return out;
    }

    int iters = 0;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        AuxSequence aux;
        const double f = eval(mid, &aux);
        ++iters;
        if (std::abs(f) <= kShootTol && !aux.stopped_at &&
            static_cast<int>(aux.c.size()) == max_len) {
            aux.stopped_at = static_cast<int>(aux.c.size()) - 1;
            finish(mid, lo, hi, iters, std::move(aux));
            return out;
        }
        if (f < 0.0)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= kBracketCollapse * hi) {
            out.failure = "bisection bracket collapsed at depth " + std::to_string(n);
            return out;
        }
    }
}

}  // namespace

ShootResult shoot(double u, int target_len) {
    if (target_len < 3)
        throw HypothesisError("shoot: target_len must be >= 3, got " +
                              std::to_string(target_len));
    ShootOutcome out = shoot_impl(u, target_len);
    if (!out.ok) {
        if (out.failure.find("bracket collapsed") != std::string::npos ||
            out.failure.find("underflow") != std::string::npos) {
            const int cap = conditioning_cap(u, target_len);
            throw NumericalError("shoot: precision exhausted at target length " +
                                 std::to_string(target_len) +
                                 "; largest achievable length is " + std::to_string(cap));
        }
        throw NumericalError("shoot: " + out.failure);
    }
    return std::move(out.result);
}

ShootResult shoot(const ModelParams& params, int target_len) {
    return shoot(params.u(), target_len);
}

int conditioning_cap(double u, int probe_limit) {
    int lo = 0;   // largest known-good
    int hi = -1;  // smallest known-bad
    for (int probe = 4; probe < probe_limit; probe *= 2) {
        if (shoot_impl(u, probe).ok)
            lo = probe;
        else {
            hi = probe;
            break;
        }
    }
    if (hi < 0) {
        if (shoot_impl(u, probe_limit).ok) return probe_limit;
        hi = probe_limit;
    }
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (shoot_impl(u, mid).ok)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::vector<double> b_sequence_from_aux(const AuxSequence& aux) {
    const std::size_t len = aux.c.size();
    if (len < 4 || !aux.stopped_at ||
        *aux.stopped_at != static_cast<int>(len) - 1)
        throw HypothesisError("b_sequence_from_aux: aux must be a terminated shot sequence");
    // the shot hit c_n = 1 with n the next-to-last index
    if (std::abs(aux.c[len - 2] - 1.0) > 1e-10)
        throw HypothesisError("b_sequence_from_aux: aux did not terminate at 1");

    std::vector<double> b(aux.c.rbegin(), aux.c.rend());  // b_k = c_{n+2-k}
    // the backward step is the exact inverse of the forward recurrence;
    // verify it held along the whole prefix
    for (std::size_t k = 2; k + 1 <= b.size(); ++k) {
        const double predicted = 1.0 + aux.u_param * b[k - 2] * b[k - 2] / b[k - 1];
        if (std::abs(predicted - b[k]) > 1e-12 * std::max(1.0, std::abs(b[k])))
            throw NumericalError("b_sequence_from_aux: forward recurrence residual too large at k = " +
                                 std::to_string(k + 1));
    }
    return b;
}

StationarySolution reverse_to_solution(const AuxSequence& aux, const ModelParams& params) {
    StationarySolution sol;
    sol.b = b_sequence_from_aux(aux);
    sol.regime = aux.regime;
    sol.u_param = aux.u_param;
    sol.prefix_length_exact = static_cast<int>(sol.b.size());
    sol.a.resize(sol.b.size());
    for (std::size_t i = 0; i < sol.b.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        sol.a[i] = -std::pow(params.lambda(), (2.0 - params.beta()) * n - 2.0) * sol.b[i];
    }
    switch (sol.regime) {
        case Regime::Subcritical:
            sol.envelope_constant = 1.0 / (1.0 - sol.u_param);
            break;
        case Regime::Critical:
            sol.envelope_constant = 0.0;  // envelope is b_k <= k, no single constant
            break;
        case Regime::Supercritical:
            sol.envelope_constant = 1.0 / (std::cbrt(sol.u_param) - 1.0);
            break;
    }
    return sol;
}

StationarySolution solve_stationary(const ModelParams& params, int target_len) {
    ShootResult shot = shoot(params, target_len);
    StationarySolution sol = reverse_to_solution(shot.aux, params);
    sol.shoot_parameter = shot.parameter;
    return sol;
}

LimitTable limit_study(const ModelParams& params, const std::vector<int>& lengths) {
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw HypothesisError("limit_study: lengths must be increasing");

    LimitTable table;
    double prev_d1 = 0.0;
    std::optional<double> prev_inc;
    for (int len : lengths) {
        ShootResult shot = shoot(params, len);
        const std::vector<double> b = b_sequence_from_aux(shot.aux);
        LimitRow row;
        row.target_len = len;
        row.d1 = b[0];
        if (!table.rows.empty()) {
            row.increment = std::abs(row.d1 - prev_d1);
            if (prev_inc && *row.increment > *prev_inc)
                table.increments_decreasing = false;
            prev_inc = row.increment;
        }
        prev_d1 = row.d1;
        table.rows.push_back(row);
    }
    // Aitken delta-squared from the last three first-elements when available
    const std::size_t m = table.rows.size();
    if (m >= 3) {
        const double x0 = table.rows[m - 3].d1;
        const double x1 = table.rows[m - 2].d1;
        const double x2 = table.rows[m - 1].d1;
        const double denom = (x2 - x1) - (x1 - x0);
        table.extrapolated_b1 =
            (std::abs(denom) > 1e-300) ? (x2 - (x2 - x1) * (x2 - x1) / denom) : x2;
    } else if (m >= 1) {
        table.extrapolated_b1 = table.rows.back().d1;
    }
    return table;
}

StationaryCheckReport envelope_check(const StationarySolution& sol) {
    StationaryCheckReport rep;
    const std::vector<double>& b = sol.b;
    const std::size_t len = b.size();
    const double tol = 1e-10;

    for (std::size_t i = 1; i < len; ++i) {  // k >= 2
        if (b[i] < 1.0 - tol) rep.lower_ok = false;
    }

    switch (sol.regime) {
        case Regime::Subcritical: {
            const double cap = sol.envelope_constant;
            for (std::size_t i = 0; i < len; ++i) {
                rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, b[i] / cap);
                if (b[i] > cap * (1.0 + tol)) rep.envelope_ok = false;
            }
            for (std::size_t i = 1; i < len; ++i)
                if (b[i] < b[i - 1] - tol) rep.monotone_ok = false;
            break;
        }
        case Regime::Critical: {
            for (std::size_t i = 0; i < len; ++i) {
                const double k = static_cast<double>(i) + 1.0;
                rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, b[i] / k);
                if (b[i] > k * (1.0 + tol)) rep.envelope_ok = false;
            }
            for (std::size_t i = 1; i < len; ++i)
                if (b[i] < b[i - 1] - tol) rep.monotone_ok = false;
            break;
        }
        case Regime::Supercritical: {
            const double u = sol.u_param;
            const double u3 = std::cbrt(u);
            // b_{k+1} <= (u^(k/3) - 1) / (u^(1/3) - 1)
            for (std::size_t i = 1; i < len; ++i) {
                const double k = static_cast<double>(i);  // b index i = k+1
                const double env = (std::pow(u, k / 3.0) - 1.0) / (u3 - 1.0);
                rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, b[i] / env);
                if (b[i] > env * (1.0 + tol)) rep.envelope_ok = false;
            }
            // limit signature: b_n u^(-n/3) roughly constant over the last half
            rep.ratio_lo = std::numeric_limits<double>::infinity();
            rep.ratio_hi = 0.0;
            for (std::size_t i = len / 2; i < len; ++i) {
                const double n = static_cast<double>(i) + 1.0;
                const double r = b[i] * std::pow(u, -n / 3.0);
                rep.ratio_lo = std::min(rep.ratio_lo, r);
                rep.ratio_hi = std::max(rep.ratio_hi, r);
            }
            break;
        }
    }
    rep.ok = rep.envelope_ok && rep.lower_ok && rep.monotone_ok &&
             (sol.regime != Regime::Supercritical || rep.ratio_lo > 0.0);
    return rep;
}

}  // namespace dyadic
