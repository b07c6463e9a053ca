#include "dyadic/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/numerics.hpp"

namespace dyadic {

namespace {

using Intervals = std::vector<std::pair<double, double>>;

/// Superlevel intervals {t in [t0, t1] : f(t) >= 0} by sampling at n_samples
/// points and bisecting each sign change.
Intervals superlevel_intervals(const std::function<double(double)>& f, double t0,
                              double t1, int n_samples) {
    Intervals out;
    const double dt = (t1 - t0) / n_samples;
    double t_prev = t0;
    bool inside = (f(t0) >= 0.0);
    double start = inside ? t0 : 0.0;
    for (int i = 1; i <= n_samples; ++i) {
        const double t = (i == n_samples) ? t1 : t0 + i * dt;
        const double v = f(t);
        if ((v >= 0.0) != inside) {
            const double cross = bisect_root(f, t_prev, t, 1e-13 * std::max(1.0, t1));
            if (inside)
                out.emplace_back(start, cross);
            else
                start = cross;
            inside = (v >= 0.0);
        }
        t_prev = t;
    }
    if (inside) out.emplace_back(start, t1);
    return out;
}

Intervals intersect(const Intervals& a, const Intervals& b) {
    Intervals out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second)
            ++i;
        else
            ++j;
    }
    return out;
}

double total_length(const Intervals& v) {
    double acc = 0.0;
    for (const auto& [lo, hi] : v) acc += hi - lo;
    return acc;
}

/// Smallest M with a_k >= 0 for all k >= M (paper convention, 1-based).
int nonnegative_from(const ShellVector& a) {
    int m = 1;
    for (int i = static_cast<int>(a.size()); i >= 1; --i) {
        if (a[i - 1] < 0.0) {
            m = i + 1;
            break;
        }
    }
    return m;
}

double segment_quadrature(const Trajectory& traj,
                          const std::function<double(const Segment&, double)>& f,
                          double tol_per_unit) {
    double acc = 0.0;
    for (const Segment& seg : traj.segments()) {
        acc += seg.h * adaptive_simpson([&](double theta) { return f(seg, theta); },
                                        0.0, 1.0, tol_per_unit * seg.h);
    }
    return acc;
}

}  // namespace

LevelSetStats level_set_measure(const Trajectory& traj, int n, double y) {
    if (traj.kind() != SystemKind::Viscous)
        throw HypothesisError("level_set_measure: viscous trajectories only");
    if (!(y > 0.0)) throw HypothesisError("level_set_measure: need y > 0");
    if (n < 1 || n > traj.n_modes())
        throw HypothesisError("level_set_measure: mode out of range");
    const int m = nonnegative_from(traj.initial_state());
    if (m > n)
        throw HypothesisError("level_set_measure: data must be nonnegative beyond M <= n, M = " +
                              std::to_string(m));

    const ModelParams& p = traj.params();
    const PaperConstants pc = compute_constants(p);
    const double a_norm_sq = energy_and_dissipation(p, traj.initial_state()).first;
    const double denom = std::pow(y, 3) * p.conv_coeff(n) + y * y * p.dissip_coeff(n);

    LevelSetStats stats;
    stats.mode = n;
    stats.level = y;
    stats.bound_a = pc.c2 * a_norm_sq / denom;
    stats.bound_b = pc.c3 * a_norm_sq / denom;

    const double t0 = traj.t_begin();
    const double t1 = traj.t_end();
    const bool has_a = (n + 2 <= traj.n_modes());

    int n_samples = std::max(64, static_cast<int>((t1 - t0) *
                                                  traj.config().dense_samples_per_unit_time));
    double prev_b = -1.0, prev_a = -1.0;
    for (int level = 0; level < 6; ++level) {
        const Intervals b = superlevel_intervals(
            [&](double t) { return traj.mode_at(t, n) - y; }, t0, t1, n_samples);
        stats.intervals_b = b;
        stats.measure_b = total_length(b);
        if (has_a) {
            const Intervals below = superlevel_intervals(
                [&](double t) { return y - traj.mode_at(t, n + 2); }, t0, t1, n_samples);
            stats.measure_a = total_length(intersect(b, below));
        }
        if (prev_b >= 0.0 && std::abs(stats.measure_b - prev_b) < 1e-8 * (t1 - t0) &&
            (!has_a || std::abs(stats.measure_a - prev_a) < 1e-8 * (t1 - t0)))
            break;
        prev_b = stats.measure_b;
        prev_a = stats.measure_a;
        n_samples *= 2;
    }
    return stats;
}

CubeIntegralReport cube_integral(const Trajectory& traj, int n) {
    if (traj.kind() != SystemKind::Viscous)
        throw HypothesisError("cube_integral: viscous trajectories only");
    if (n < 1 || n > traj.n_modes())
        throw HypothesisError("cube_integral: mode out of range");
    const int m = nonnegative_from(traj.initial_state());
    if (m > n)
        throw HypothesisError("cube_integral: data must be nonnegative beyond M <= n, M = " +
                              std::to_string(m));

    const ModelParams& p = traj.params();
    const PaperConstants pc = compute_constants(p);
    const double a_norm = l2_norm(traj.initial_state());

    CubeIntegralReport rep;
    rep.mode = n;
    rep.integral_value = segment_quadrature(
        traj,
        [n](const Segment& seg, double theta) {
            const double u = seg.eval_mode(theta, n - 1);
            return u * u * u;
        },
        1e-14);

    const double e_end = energy_and_dissipation(p, traj.states().back()).first;
    rep.tail_bound = a_norm * e_end / p.dissip_coeff(n);
    rep.paper_bound = 3.0 * pc.c3 * a_norm * a_norm / p.conv_coeff(n) *
                      std::log(std::pow(p.lambda(), (p.beta() - 2.0) * n) * a_norm + 1.0);
    rep.within_bound = (rep.integral_value + rep.tail_bound <= rep.paper_bound);
    return rep;
}

double blowup_functional(const Trajectory& traj, double eps) {
    if (!(eps > 0.0)) throw HypothesisError("blowup_functional: need eps > 0");
    const ModelParams& p = traj.params();
    const int n_modes = traj.n_modes();
    std::vector<double> weight(n_modes);
    for (int n = 1; n <= n_modes; ++n)
        weight[n - 1] = std::pow(p.lambda(), 2.0 * (eps + 1.0 / 3.0) * p.beta() * n);

    return segment_quadrature(
        traj,
        [&](const Segment& seg, double theta) {
            double s = 0.0;
            for (int i = 0; i < n_modes; ++i) {
                const double u = seg.eval_mode(theta, i);
                s += weight[i] * u * u;
            }
            return std::pow(s, 1.5);
        },
        1e-10);
}

namespace {

PsiMetric psi_on_grid(const Trajectory& a, int n_cap,
                      const std::function<ShellVector(double)>& other) {
    PsiMetric out;
    out.times = a.sample_grid();
    out.values.reserve(out.times.size());
    for (double t : out.times) {
        const ShellVector ua = a.at(t);
        const ShellVector ub = other(t);
        double psi = 0.0;
        for (int n = 1; n <= n_cap; ++n) {
            const double d = ua[n - 1] - ub[n - 1];
            psi += std::ldexp(d * d, -n);  // 2^-n weight
        }
        out.values.push_back(psi);
        out.max_value = std::max(out.max_value, psi);
    }
    out.final_value = out.values.back();
    return out;
}

}  // namespace

PsiMetric psi_metric(const Trajectory& a, const Trajectory& b, int n_cap) {
    if (a.params().lambda() != b.params().lambda() || a.params().beta() != b.params().beta())
        throw HypothesisError("psi_metric: mismatched parameters");
    if (std::abs(a.t_end() - b.t_end()) > 1e-12)
        throw HypothesisError("psi_metric: mismatched time spans");
    if (n_cap < 1 || n_cap > std::min(a.n_modes(), b.n_modes()))
        throw HypothesisError("psi_metric: n_cap out of range");
    for (int n = 1; n <= n_cap; ++n)
        if (a.initial_state()[n - 1] != b.initial_state()[n - 1])
            throw HypothesisError("psi_metric: initial data differ at mode " + std::to_string(n));
    return psi_on_grid(a, n_cap, [&](double t) { return b.at(t); });
}

PsiMetric psi_metric_constant(const Trajectory& traj, const ShellVector& fixed, int n_cap) {
    if (n_cap < 1 || n_cap > std::min<int>(traj.n_modes(), static_cast<int>(fixed.size())))
        throw HypothesisError("psi_metric_constant: n_cap out of range");
    return psi_on_grid(traj, n_cap, [&](double) { return fixed; });
}

}  // namespace dyadic
