#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dyadic/checks.hpp"

using namespace dyadic;

namespace {

ShellVector envelope_data(const ModelParams& p, int n_modes, double eps) {
    ShellVector a(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) a[n - 1] = eps * p.envelope_scale(n);
    return a;
}

}  // namespace

TEST_CASE("nonnegative data preserve sign") {
    const ModelParams p(2.0, 2.5);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> d(0.0, 0.2);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    for (int trial = 0; trial < 10; ++trial) {
        ShellVector a(8);
        for (double& v : a) v = d(rng);
        const Trajectory traj = integrate(p, a, cfg, SystemKind::Viscous);
        const SignReport rep = check_sign_structure(traj);
        CHECK(rep.all_ok);
        for (const ModeSignReport& mr : rep.modes)
            CHECK(mr.verdict == SignVerdict::NonnegativePreserved);
    }
}

TEST_CASE("a negative mode crosses zero at most once and never returns") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    ShellVector a = {0.1, -0.05, 0.08, 0.04, 0.02, 0.01};
    const Trajectory traj = integrate(p, a, cfg, SystemKind::Viscous);
    const SignReport rep = check_sign_structure(traj);
    CHECK(rep.all_ok);
    const ModeSignReport& m2 = rep.modes[1];
    CHECK((m2.verdict == SignVerdict::SingleCrossing ||
           m2.verdict == SignVerdict::StaysNegative));
    if (m2.verdict == SignVerdict::SingleCrossing) {
        REQUIRE(m2.crossing_time.has_value());
        CHECK(*m2.crossing_time > 0.0);
        CHECK(*m2.crossing_time < 2.0);
    }
}

TEST_CASE("sign check rejects inviscid trajectories") {
    const ModelParams p(2.0, 1.0);
    IntegratorConfig cfg;
    const Trajectory traj = integrate(p, {0.1, 0.1}, cfg, SystemKind::Inviscid);
    CHECK_THROWS_AS(check_sign_structure(traj), HypothesisError);
}

TEST_CASE("lower bound check enforces its hypotheses") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    const Trajectory traj =
        integrate(p, envelope_data(p, 6, 0.05), cfg, SystemKind::Viscous);
    CHECK_THROWS_AS(check_lower_bound(traj, 0.3, 1), HypothesisError);  // eps2 > 1/4
    CHECK_THROWS_AS(check_lower_bound(traj, 0.2, 0), HypothesisError);  // bad mode
    CHECK_NOTHROW(check_lower_bound(traj, 0.2, 1));
}

TEST_CASE("lower bound check rejects inadmissible initial data") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    ShellVector a = envelope_data(p, 6, 0.05);
    a[2] = -0.5 * p.envelope_scale(3);  // far below -eps2 lambda^((2-beta) 3)
    const Trajectory traj = integrate(p, a, cfg, SystemKind::Viscous);
    CHECK_THROWS_AS(check_lower_bound(traj, 0.1, 1), HypothesisError);
}

TEST_CASE("lower bound holds for admissible data") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    const PaperConstants pc = compute_constants(p);
    ShellVector a = envelope_data(p, 12, 0.9 * pc.eps_init);
    a[1] = -a[1];  // one negative admissible entry
    const Trajectory traj = integrate(p, a, cfg, SystemKind::Viscous);
    const LowerBoundReport rep = check_lower_bound(traj, 0.9 * pc.eps2_max, 1);
    CHECK(rep.ok);
    CHECK(rep.violations == 0);
    CHECK(rep.corollary_violations == 0);
}

TEST_CASE("envelope check enforces the eps3 ceiling") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    const Trajectory traj =
        integrate(p, envelope_data(p, 6, 0.05), cfg, SystemKind::Viscous);
    const PaperConstants pc = compute_constants(p);
    CHECK_THROWS_AS(check_envelope(traj, 1.01 * pc.eps3_max, 1), HypothesisError);
    CHECK_NOTHROW(check_envelope(traj, pc.eps3_max, 1));
}

TEST_CASE("envelope holds over the full span for admissible data") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    cfg.t_end = 2.0;
    const PaperConstants pc = compute_constants(p);
    const double eps3 = 0.9 * pc.eps3_max;
    ShellVector a = envelope_data(p, 12, 0.9 * pc.eps_init);
    const Trajectory traj = integrate(p, a, cfg, SystemKind::Viscous);
    const EnvelopeReport rep = check_envelope(traj, eps3, 1);
    CHECK(rep.ok);
    CHECK(rep.violations == 0);
    CHECK(rep.t_prime == doctest::Approx(2.0));
}

TEST_CASE("convergence study: truncation differences shrink") {
    const ModelParams p(2.0, 2.5);
    const PaperConstants pc = compute_constants(p);
    ShellVector data = envelope_data(p, 16, 0.5 * pc.eps_init);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    const ConvergenceTable table =
        convergence_study(p, data, {4, 8, 12, 16}, cfg, SystemKind::Viscous);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.monotone_decreasing);
    CHECK(table.rows.back().max_diff < table.rows.front().max_diff);
}

TEST_CASE("convergence study rejects unordered lists") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    CHECK_THROWS_AS(convergence_study(p, {0.1}, {8, 4}, cfg), InvalidStateError);
}
