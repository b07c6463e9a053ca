#include "dyadic/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dyadic/numerics.hpp"

namespace dyadic {

std::array<double, 4> phi_functions(double x) {
    std::array<double, 4> phi{};
    if (std::abs(x) < 0.5) {
        // phi_k(x) = sum_{j>=0} x^j / (j+k)!
        for (int k = 1; k <= 4; ++k) {
            double fact = 1.0;
            for (int i = 2; i <= k; ++i) fact *= i;  // k!
            double term = 1.0 / fact;
            double sum = term;
            for (int j = 1; j <= 18; ++j) {
                term *= x / (j + k);
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            }
            phi[k - 1] = sum;
        }
        return phi;
    }
    phi[0] = std::expm1(x) / x;
    double fact = 1.0;
    for (int k = 1; k <= 3; ++k) {
        fact *= k;
        phi[k] = (phi[k - 1] - 1.0 / fact) / x;
    }
    return phi;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    struct Impl {
        const std::function<double(double)>& f;
        double recurse(double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
                return left + right + delta / 15.0;
            return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    if (a == b) return 0.0;
    Impl impl{f};
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return impl.recurse(a, b, fa, fm, fb, whole, tol, 40);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void IntegratorConfig::validate() const {
    if (!(t_end > 0.0)) throw InvalidStateError("IntegratorConfig: t_end must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw InvalidStateError("IntegratorConfig: tolerances must be positive");
    if (!(max_step > 0.0)) throw InvalidStateError("IntegratorConfig: max_step must be > 0");
    if (dense_samples_per_unit_time < 1)
        throw InvalidStateError("IntegratorConfig: dense_samples_per_unit_time must be >= 1");
}

double Segment::eval_mode(double theta, int i) const {
    const double zt = z[i] * theta;
    const auto phi = phi_functions(-zt);
    const double decay = (zt > 700.0) ? 0.0 : std::exp(-zt);
    double val = decay * u0[i];
    val += h * theta * (gamma[0][i] * phi[0] +
                        theta * (gamma[1][i] * phi[1] +
                                 theta * (2.0 * gamma[2][i] * phi[2] +
                                          theta * 6.0 * gamma[3][i] * phi[3])));
    // smooth blend of the (tiny) endpoint defect keeps dense output
    // continuous with the stored node states
    val += theta * theta * (3.0 - 2.0 * theta) * endpoint_defect[i];
    return val;
}

namespace {

/// Nonlinear part of the RHS: N_n = kappa-weighted convection terms. For the
/// viscous system the full RHS is -lambda^(2n) u_n + N_n; for the inviscid
/// system the RHS is N_n itself.
ShellVector nonlinear_part(const ModelParams& p, const ShellVector& u) {
    const int n_modes = static_cast<int>(u.size());
    ShellVector out(u.size());
    for (int n = 1; n <= n_modes; ++n) {
        const double um = (n >= 2) ? u[n - 2] : 0.0;
        const double up = (n < n_modes) ? u[n] : 0.0;
        out[n - 1] = p.conv_coeff(n) * um * um - p.conv_coeff(n + 1) * u[n - 1] * up;
    }
    return out;
}

/// Time derivative of the nonlinear part along the flow, given udot.
ShellVector nonlinear_part_dot(const ModelParams& p, const ShellVector& u,
                               const ShellVector& udot) {
    const int n_modes = static_cast<int>(u.size());
    ShellVector out(u.size());
    for (int n = 1; n <= n_modes; ++n) {
        const double um = (n >= 2) ? u[n - 2] : 0.0;
        const double umd = (n >= 2) ? udot[n - 2] : 0.0;
        const double up = (n < n_modes) ? u[n] : 0.0;
        const double upd = (n < n_modes) ? udot[n] : 0.0;
        out[n - 1] = 2.0 * p.conv_coeff(n) * um * umd -
                     p.conv_coeff(n + 1) * (udot[n - 1] * up + u[n - 1] * upd);
    }
    return out;
}

struct System {
    const ModelParams& p;
    SystemKind kind;
    std::vector<double> lin;  // lambda^(2n), or zeros for inviscid

    explicit System(const ModelParams& params, SystemKind k, int n_modes)
        : p(params), kind(k), lin(n_modes, 0.0) {
        if (kind == SystemKind::Viscous)
            for (int n = 1; n <= n_modes; ++n) lin[n - 1] = p.dissip_coeff(n);
    }

    ShellVector rhs(const ShellVector& u) const {
        ShellVector out = nonlinear_part(p, u);
        for (std::size_t i = 0; i < u.size(); ++i) out[i] -= lin[i] * u[i];
        return out;
    }

    /// One exponential RK4 step of size h (Cox-Matthews ETDRK4). The linear
    /// factors e^(-lambda^(2n) h) and the phi-function weights are exact, so
    /// a mode sitting at its stiff quasi-equilibrium (constant nonlinear
    /// forcing) is reproduced without step-size restriction; a plain
    /// integrating-factor step loses that property and stalls at large
    /// lambda^(2n) h. Reduces to classical RK4 when the linear part is zero.
    ShellVector if_rk4_step(const ShellVector& u0, double h) const {
        const std::size_t m = u0.size();
        std::vector<double> e_half(m), e_full(m), p_half(m), wa(m), wb(m), wc(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double z = -lin[i] * h;
            e_half[i] = std::exp(0.5 * z);
            e_full[i] = e_half[i] * e_half[i];
            p_half[i] = phi_functions(0.5 * z)[0];
            const auto phi = phi_functions(z);
            wa[i] = phi[0] - 3.0 * phi[1] + 4.0 * phi[2];
            wb[i] = phi[1] - 2.0 * phi[2];
            wc[i] = 4.0 * phi[2] - phi[1];
        }
        const ShellVector k1 = nonlinear_part(p, u0);
        ShellVector s2(m);
        for (std::size_t i = 0; i < m; ++i)
            s2[i] = e_half[i] * u0[i] + 0.5 * h * p_half[i] * k1[i];
        const ShellVector k2 = nonlinear_part(p, s2);
        ShellVector s3(m);
        for (std::size_t i = 0; i < m; ++i)
            s3[i] = e_half[i] * u0[i] + 0.5 * h * p_half[i] * k2[i];
        const ShellVector k3 = nonlinear_part(p, s3);
        ShellVector s4(m);
        for (std::size_t i = 0; i < m; ++i)
            s4[i] = e_half[i] * s2[i] + 0.5 * h * p_half[i] * (2.0 * k3[i] - k1[i]);
        const ShellVector k4 = nonlinear_part(p, s4);
        ShellVector u1(m);
        for (std::size_t i = 0; i < m; ++i)
            u1[i] = e_full[i] * u0[i] +
                    h * (wa[i] * k1[i] + 2.0 * wb[i] * (k2[i] + k3[i]) + wc[i] * k4[i]);
        return u1;
    }
};

// Dormand-Prince 5(4) coefficients.
constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double dp_b5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                             -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,       7571.0 / 16695, 393.0 / 640,
                             -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

}  // namespace

std::size_t Trajectory::segment_index(double t) const {
    // binary search for the segment containing t
    std::size_t lo = 0, hi = segments_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (segments_[mid].t0 <= t)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

ShellVector Trajectory::at(double t) const {
    if (segments_.empty()) return states_.front();
    t = std::clamp(t, times_.front(), times_.back());
    const Segment& seg = segments_[segment_index(t)];
    const double theta = std::clamp((t - seg.t0) / seg.h, 0.0, 1.0);
    ShellVector out(seg.u0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = seg.eval_mode(theta, static_cast<int>(i));
    return out;
}

double Trajectory::mode_at(double t, int n) const {
    if (segments_.empty()) return states_.front().at(n - 1);
    t = std::clamp(t, times_.front(), times_.back());
    const Segment& seg = segments_[segment_index(t)];
    const double theta = std::clamp((t - seg.t0) / seg.h, 0.0, 1.0);
    return seg.eval_mode(theta, n - 1);
}

std::vector<double> Trajectory::sample_grid() const {
    const double t1 = times_.back();
    const double dt = 1.0 / cfg_.dense_samples_per_unit_time;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(t1 / dt) + 2);
    for (double t = times_.front(); t < t1; t += dt) out.push_back(t);
    out.push_back(t1);
    return out;
}

Trajectory integrate(const ModelParams& params, const ShellVector& a,
                     const IntegratorConfig& cfg, SystemKind kind) {
    cfg.validate();
    if (a.empty()) throw InvalidStateError("integrate: need at least one mode");
    require_finite(a, "integrate");

    const int n_modes = static_cast<int>(a.size());
    const System sys(params, kind, n_modes);

    Trajectory traj(params, kind, cfg);
    traj.times_.push_back(0.0);
    traj.states_.push_back(a);

    double t = 0.0;
    ShellVector u = a;
    ShellVector rhs0 = sys.rhs(u);

    // initial step guess from the RHS scale
    double h = cfg.max_step;
    for (int i = 0; i < n_modes; ++i) {
        const double scale = std::abs(u[i]) + cfg.abs_tol / cfg.rel_tol;
        const double rate = std::abs(rhs0[i]) / scale;
        if (rate > 0.0) h = std::min(h, 0.1 / rate);
    }
    h = std::min(h, cfg.t_end);

    const bool classical = (cfg.scheme == Scheme::ClassicalRk45);
    constexpr long kMaxStepAttempts = 20'000'000;
    long attempts = 0;

    while (t < cfg.t_end) {
        h = std::min(h, cfg.t_end - t);
        if (++attempts > kMaxStepAttempts)
            throw NumericalError("integrate: step budget exhausted at t = " +
                                 std::to_string(t));

        ShellVector u_new, u_mid;
        double err_norm = 0.0;
        int worst_mode = 1;

        if (!classical) {
            // step doubling: two half steps vs one full step
            const ShellVector big = sys.if_rk4_step(u, h);
            u_mid = sys.if_rk4_step(u, 0.5 * h);
            u_new = sys.if_rk4_step(u_mid, 0.5 * h);
            double acc = 0.0;
            double worst = 0.0;
            for (int i = 0; i < n_modes; ++i) {
                const double e = (u_new[i] - big[i]) / 15.0;
                const double sc = cfg.abs_tol +
                                  cfg.rel_tol * std::max(std::abs(u[i]), std::abs(u_new[i]));
                const double r = std::abs(e) / sc;
                acc += r * r;
                if (r > worst) {
                    worst = r;
                    worst_mode = i + 1;
                }
            }
            err_norm = std::sqrt(acc / n_modes);
        } else {
            // Dormand-Prince 5(4) on the full right-hand side
            std::array<ShellVector, 7> k;
            k[0] = rhs0;
            for (int s = 1; s < 7; ++s) {
                ShellVector stage = u;
                for (int j = 0; j < s; ++j)
                    for (int i = 0; i < n_modes; ++i) stage[i] += h * dp_a[s][j] * k[j][i];
                k[s] = sys.rhs(stage);
            }
            u_new = u;
            double acc = 0.0;
            double worst = 0.0;
            for (int i = 0; i < n_modes; ++i) {
                double e = 0.0;
                for (int s = 0; s < 7; ++s) {
                    u_new[i] += h * dp_b5[s] * k[s][i];
                    e += h * (dp_b5[s] - dp_b4[s]) * k[s][i];
                }
                const double sc = cfg.abs_tol +
                                  cfg.rel_tol * std::max(std::abs(u[i]), std::abs(u_new[i]));
                const double r = std::abs(e) / sc;
                acc += r * r;
                if (r > worst) {
                    worst = r;
                    worst_mode = i + 1;
                }
            }
            err_norm = std::sqrt(acc / n_modes);
            (void)dp_c;
        }

        bool finite = true;
        for (double v : u_new)
            if (!std::isfinite(v)) finite = false;

        if (!finite || err_norm > 1.0) {
            const double shrink = finite
                                      ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2))
                                      : 0.2;
            h *= shrink;
            // the floor must scale with t, not with 1: resolving the initial
            // boundary layer of mode n legitimately needs h ~ lambda^(-2n)
            const double floor = std::max(
                1e-250, 4.0 * std::numeric_limits<double>::epsilon() * t);
            if (h < floor)
                throw NumericalError(
                    "integrate: step size underflow at t = " + std::to_string(t) +
                    " (stiffness failure, worst mode " + std::to_string(worst_mode) + ")");
            continue;
        }

        // accepted: build the dense-output segment from Hermite data of the
        // nonlinear part at both endpoints
        Segment seg;
        seg.t0 = t;
        seg.h = h;
        seg.u0 = u;
        seg.z.resize(n_modes);
        for (int i = 0; i < n_modes; ++i) seg.z[i] = sys.lin[i] * h;

        const ShellVector n0 = nonlinear_part(params, u);
        const ShellVector n1 = nonlinear_part(params, u_new);
        ShellVector rhs1 = sys.rhs(u_new);
        const ShellVector nd0 = nonlinear_part_dot(params, u, rhs0);
        const ShellVector nd1 = nonlinear_part_dot(params, u_new, rhs1);

        for (int c = 0; c < 4; ++c) seg.gamma[c].resize(n_modes);
        seg.endpoint_defect.resize(n_modes);
        for (int i = 0; i < n_modes; ++i) {
            const double d0 = h * nd0[i];
            const double d1 = h * nd1[i];
            seg.gamma[0][i] = n0[i];
            seg.gamma[1][i] = d0;
            seg.gamma[2][i] = 3.0 * (n1[i] - n0[i]) - 2.0 * d0 - d1;
            seg.gamma[3][i] = 2.0 * (n0[i] - n1[i]) + d0 + d1;
            seg.endpoint_defect[i] = 0.0;
        }
        for (int i = 0; i < n_modes; ++i) {
            const double interp_end = seg.eval_mode(1.0, i);
            seg.endpoint_defect[i] = u_new[i] - interp_end;
        }

        t += h;
        u = u_new;
        rhs0 = std::move(rhs1);
        traj.times_.push_back(t);
        traj.states_.push_back(u);
        traj.segments_.push_back(std::move(seg));

        if (l2_norm(u) > 1e12) {
            traj.blown_up_ = true;
            traj.blowup_time_ = t;
            break;
        }

        const double grow = (err_norm > 0.0)
                                ? std::min(5.0, 0.9 * std::pow(err_norm, -0.2))
                                : 5.0;
        h = std::min(h * grow, cfg.max_step);
    }

    return traj;
}

namespace {

// 15-point Gauss-Legendre rule on [-1, 1] (nonnegative abscissas; the rule is
// symmetric).
constexpr double kGl15X[8] = {0.0,
                              0.2011940939974345,
                              0.3941513470775634,
                              0.5709721726085388,
                              0.7244177313601701,
                              0.8482065834104272,
                              0.9372733924007060,
                              0.9879925180204854};
constexpr double kGl15W[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                              0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                              0.0703660474881081, 0.0307532419961173};

/// int_0^1 u_i(theta)^2 dtheta for one dense-output segment, in closed form.
/// The mode is A e^(-z theta) + cubic(theta); the exponential-squared and
/// cross terms reduce to phi functions, the cubic-squared term is a rational
/// sum. The decomposition is ill-conditioned for small z (coefficients carry
/// 1/z^4), where a 15-point Gauss rule on the smooth integrand is exact to
/// roundoff instead.
double segment_square_integral(const Segment& seg, int i) {
    const double z = seg.z[i];
    if (z < 4.0) {
        double acc = 0.0;
        for (int q = 0; q < 8; ++q) {
            const double u_hi = seg.eval_mode(0.5 * (1.0 + kGl15X[q]), i);
            double val = u_hi * u_hi;
            if (q > 0) {
                const double u_lo = seg.eval_mode(0.5 * (1.0 - kGl15X[q]), i);
                val += u_lo * u_lo;
            }
            acc += 0.5 * kGl15W[q] * val;
        }
        return acc;
    }

    const double h = seg.h;
    const double c1 = h * seg.gamma[0][i] / z;
    const double c2 = h * seg.gamma[1][i] / (z * z);
    const double c3 = 2.0 * h * seg.gamma[2][i] / (z * z * z);
    const double c4 = 6.0 * h * seg.gamma[3][i] / (z * z * z * z);
    const double d = seg.endpoint_defect[i];

    // u(theta) = A e^(-z theta) + B0 + B1 theta + B2 theta^2 + B3 theta^3
    const double a_coef = seg.u0[i] - c1 + c2 - c3 + c4;
    const double b[4] = {c1 - c2 + c3 - c4, (c2 - c3 + c4) * z,
                         0.5 * (c3 - c4) * z * z + 3.0 * d,
                         c4 * z * z * z / 6.0 - 2.0 * d};

    double val = a_coef * a_coef * phi_functions(-2.0 * z)[0];

    // cross term: rewrite the cubic in powers of s = 1 - theta, since
    // int_0^1 e^(-z theta) (1 - theta)^k dtheta = k! phi_(k+1)(-z)
    const double bs[4] = {b[0] + b[1] + b[2] + b[3], -(b[1] + 2.0 * b[2] + 3.0 * b[3]),
                          b[2] + 3.0 * b[3], -b[3]};
    const auto phi = phi_functions(-z);
    double fact = 1.0;
    for (int k = 0; k < 4; ++k) {
        val += 2.0 * a_coef * bs[k] * fact * phi[k];
        fact *= (k + 1);
    }

    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) val += b[j] * b[k] / (j + k + 1);
    return val;
}

}  // namespace

EnergyReport energy_report(const Trajectory& traj) {
    if (traj.kind() != SystemKind::Viscous)
        throw HypothesisError("energy_report: only viscous trajectories carry dissipation");

    const ModelParams& p = traj.params();
    const int n_modes = traj.n_modes();
    std::vector<double> lin(n_modes);
    for (int n = 1; n <= n_modes; ++n) lin[n - 1] = p.dissip_coeff(n);

    EnergyReport rep;
    const auto& times = traj.times();
    const auto& states = traj.states();
    const double e0 = energy_and_dissipation(p, states.front()).first;


    rep.times = times;
    rep.energy.resize(times.size());
    rep.cumulative_dissipation.resize(times.size());
    rep.identity_residual.resize(times.size());
    rep.leray_hopf_slack.resize(times.size());

    rep.energy[0] = e0;
    rep.cumulative_dissipation[0] = 0.0;
    rep.identity_residual[0] = 0.0;
    rep.leray_hopf_slack[0] = 0.0;
    rep.min_slack = 0.0;

    double d_acc = 0.0;
    for (std::size_t s = 0; s < traj.segments().size(); ++s) {
        const Segment& seg = traj.segments()[s];
        double seg_int = 0.0;
        for (int i = 0; i < n_modes; ++i)
            seg_int += lin[i] * segment_square_integral(seg, i);
        d_acc += 2.0 * seg.h * seg_int;
        const double e = energy_and_dissipation(p, states[s + 1]).first;
        rep.energy[s + 1] = e;
        rep.cumulative_dissipation[s + 1] = d_acc;
        rep.identity_residual[s + 1] = std::abs(e - e0 + d_acc);
        rep.leray_hopf_slack[s + 1] = e0 - e - d_acc;
        rep.max_identity_residual =
            std::max(rep.max_identity_residual, rep.identity_residual[s + 1]);
        rep.min_slack = std::min(rep.min_slack, rep.leray_hopf_slack[s + 1]);
    }
    return rep;
}

}  // namespace dyadic
