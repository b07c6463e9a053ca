#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dyadic/model.hpp"

namespace dyadic {

enum class SystemKind { Viscous, Inviscid };

enum class Scheme {
    /// Exponential Runge-Kutta 4 (ETD, Cox-Matthews tableau) with step
    /// doubling. The linear term lambda^(2n) u_n is integrated exactly via
    /// e^(-lambda^(2n) h) and phi-function weights, so stiffness of high
    /// modes imposes no step-size restriction from the linear part.
    ExponentialIfRk4,
    /// Classical adaptive embedded Dormand-Prince 5(4), for cross-validation
    /// on small mode counts.
    ClassicalRk45,
};

struct IntegratorConfig {
    double t_end = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    int dense_samples_per_unit_time = 256;
    Scheme scheme = Scheme::ExponentialIfRk4;

    void validate() const;
};

/// One accepted step. Dense output represents each mode as
///   u(t0 + theta h) = e^(-z theta) u0
///                   + h sum_k gamma_k k! theta^(k+1) phi_{k+1}(-z theta)
/// where z = lambda^(2n) h (0 for the inviscid system) and the cubic
/// {gamma_k} interpolates the nonlinear part of the right-hand side in
/// Hermite form over the step. Exact for a decoupled linear mode.
struct Segment {
    double t0;
    double h;
    ShellVector u0;
    std::vector<double> z;
    std::array<std::vector<double>, 4> gamma;
    ShellVector endpoint_defect;  ///< stored state minus interpolant at theta = 1

    double eval_mode(double theta, int mode_index) const;
};

class Trajectory {
public:
    Trajectory(ModelParams params, SystemKind kind, IntegratorConfig cfg)
        : params_(params), kind_(kind), cfg_(cfg) {}

    const ModelParams& params() const noexcept { return params_; }
    SystemKind kind() const noexcept { return kind_; }
    const IntegratorConfig& config() const noexcept { return cfg_; }

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<ShellVector>& states() const noexcept { return states_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }

    int n_modes() const { return states_.empty() ? 0 : static_cast<int>(states_[0].size()); }
    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }

    const ShellVector& initial_state() const { return states_.front(); }

    bool blown_up() const noexcept { return blown_up_; }
    double blowup_time() const noexcept { return blowup_time_; }

    /// Dense-output state at time t (t within [t_begin, t_end]).
    ShellVector at(double t) const;
    /// Dense-output single mode (1-based) at time t.
    double mode_at(double t, int n) const;

    /// Sample times implied by dense_samples_per_unit_time, always including
    /// the endpoint.
    std::vector<double> sample_grid() const;

private:
    friend Trajectory integrate(const ModelParams&, const ShellVector&,
                                const IntegratorConfig&, SystemKind);

    std::size_t segment_index(double t) const;

    ModelParams params_;
    SystemKind kind_;
    IntegratorConfig cfg_;
    std::vector<double> times_;
    std::vector<ShellVector> states_;
    std::vector<Segment> segments_;
    bool blown_up_ = false;
    double blowup_time_ = 0.0;
};

/// Integrate the N-mode truncation from initial data `a` over [0, t_end].
/// Throws NumericalError on step-size underflow (naming the offending mode).
/// Norm overflow past 1e12 ends the run early with the trajectory flagged
/// as blown up (possible for inviscid supercritical data).
Trajectory integrate(const ModelParams& params, const ShellVector& a,
                     const IntegratorConfig& cfg, SystemKind kind);

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> energy;                ///< E(t)
    std::vector<double> cumulative_dissipation;///< D(t) = 2 sum_n int_0^t lambda^(2n) u_n^2
    std::vector<double> identity_residual;     ///< |E(t) - E(0) + D(t)|
    std::vector<double> leray_hopf_slack;      ///< E(0) - E(t) - D(t)
    double max_identity_residual = 0.0;
    double min_slack = 0.0;
};

/// Energy identity / inequality report for a viscous trajectory.
/// Throws HypothesisError for an inviscid trajectory.
EnergyReport energy_report(const Trajectory& traj);

}  // namespace dyadic
