#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "dyadic/model.hpp"

using namespace dyadic;

namespace {

double ulp_distance(double a, double b) {
    if (a == b) return 0.0;
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) / (scale * std::numeric_limits<double>::epsilon());
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams(1.0, 2.5), HypothesisError);
    CHECK_THROWS_AS(ModelParams(0.5, 2.5), HypothesisError);
    CHECK_THROWS_AS(ModelParams(2.0, 0.0), HypothesisError);
    CHECK_THROWS_AS(ModelParams(2.0, -1.0), HypothesisError);
    CHECK_NOTHROW(ModelParams(2.0, 2.5));
}

TEST_CASE("derived coefficients at lambda=2, beta=2.5") {
    const ModelParams p(2.0, 2.5);
    CHECK(p.kappa() == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-15));
    CHECK(p.u() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.dissip_coeff(3) == doctest::Approx(64.0).epsilon(1e-15));
    CHECK(p.conv_coeff(2) == doctest::Approx(32.0).epsilon(1e-15));
    CHECK(p.envelope_scale(2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed-form constants at lambda=2, beta=2.5") {
    const PaperConstants pc = compute_constants(ModelParams(2.0, 2.5));
    CHECK(pc.eps1 == doctest::Approx(0.14644660940672624).epsilon(1e-14));
    CHECK(pc.eps2_max == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pc.eps3_max == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(pc.eps_init == doctest::Approx(0.14644660940672624).epsilon(1e-14));
    CHECK(pc.c1 == doctest::Approx(1.0 / 2048.0).epsilon(1e-15));
    CHECK(pc.c2 == doctest::Approx(2048.3333333333333).epsilon(1e-13));
    CHECK(pc.c3 == doctest::Approx(2114.4086021505374).epsilon(1e-13));
    CHECK(pc.kappa_rate == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(pc.nu_rate == doctest::Approx((1.0 + std::sqrt(17.0)) / 4.0).epsilon(1e-15));
}

TEST_CASE("constant invariants over random parameters") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> dl(1.0 + 1e-6, 4.0);
    std::uniform_real_distribution<double> db(1e-6, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams p(dl(rng), db(rng));
        const PaperConstants pc = compute_constants(p);
        CAPTURE(p.lambda());
        CAPTURE(p.beta());
        REQUIRE(pc.eps1 > 0.0);
        REQUIRE(pc.eps3_max <= pc.eps2_max);
        REQUIRE(pc.eps_init == std::min(pc.eps1, pc.eps3_max));
        REQUIRE(pc.c1 > 0.0);
        REQUIRE(pc.c2 > 0.0);
        REQUIRE(pc.c3 > pc.c2);
        // kappa and nu solve x^2 - x = 1/u and 2x^2 - x = 1/u respectively
        const double inv_u = 1.0 / p.u();
        REQUIRE(pc.kappa_rate * pc.kappa_rate - pc.kappa_rate ==
                doctest::Approx(inv_u).epsilon(1e-12));
        REQUIRE(2.0 * pc.nu_rate * pc.nu_rate - pc.nu_rate ==
                doctest::Approx(inv_u).epsilon(1e-12));
        if (p.u() < 1.0) {
            REQUIRE(pc.kappa_rate > pc.nu_rate);
            REQUIRE(pc.nu_rate > 1.0);
        }
    }
}

TEST_CASE("viscous right-hand side example") {
    const ModelParams p(2.0, 2.5);
    const ShellVector rhs = rhs_viscous(p, {1.0, 1.0});
    REQUIRE(rhs.size() == 2);
    CHECK(rhs[0] == doctest::Approx(-36.0).epsilon(1e-14));
    CHECK(rhs[1] == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("inviscid right-hand side example") {
    const ModelParams p(2.0, 1.0);  // kappa = 2
    const ShellVector rhs = rhs_inviscid(p, {1.0, 1.0});
    REQUIRE(rhs.size() == 2);
    CHECK(rhs[0] == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(rhs[1] == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("zero state maps to zero") {
    const ModelParams p(2.0, 2.5);
    const ShellVector z(8, 0.0);
    for (double v : rhs_viscous(p, z)) CHECK(v == 0.0);
    for (double v : rhs_inviscid(p, z)) CHECK(v == 0.0);
}

TEST_CASE("inviscid rhs equals viscous rhs plus the dissipation term") {
    const ModelParams p(2.0, 2.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        ShellVector u(10);
        for (double& v : u) v = d(rng);
        const ShellVector rv = rhs_viscous(p, u);
        const ShellVector ri = rhs_inviscid(p, u);
        for (int n = 1; n <= 10; ++n) {
            const double dissip = p.dissip_coeff(n) * u[n - 1];
            const double reconstructed = rv[n - 1] + dissip;
            // the error scale is set by the cancelling terms, not the result
            const double scale =
                std::max({std::abs(rv[n - 1]), std::abs(dissip), std::abs(ri[n - 1])});
            REQUIRE(std::abs(ri[n - 1] - reconstructed) <=
                    4.0 * std::numeric_limits<double>::epsilon() * scale);
        }
    }
}

TEST_CASE("nonlinear transfer telescopes: inviscid energy flux vanishes") {
    const ModelParams p(2.0, 1.5);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ShellVector u(12);
        for (double& v : u) v = d(rng);
        const ShellVector rhs = rhs_inviscid(p, u);
        double flux = 0.0, scale = 0.0;
        for (int n = 0; n < 12; ++n) {
            flux += u[n] * rhs[n];
            scale += std::abs(u[n] * rhs[n]);
        }
        REQUIRE(std::abs(flux) <=
                10.0 * std::numeric_limits<double>::epsilon() * scale);
    }
}

TEST_CASE("stationary residual of the exact one-mode balance") {
    // N=2, a chosen so the first equation balances exactly:
    // lambda^2 a1 + lambda^(2 beta) a1 a2 = 0 with a1 free => a2 = -lambda^(2-2beta)
    const ModelParams p(2.0, 2.5);
    const double a2 = -std::pow(2.0, 2.0 - 5.0);
    const StationaryResidual res = stationary_residual(p, {0.7, a2});
    REQUIRE(res.absolute.size() == 1);
    CHECK(res.max_relative < 1e-15);
}

TEST_CASE("stationary residual rejects short vectors") {
    const ModelParams p(2.0, 2.5);
    CHECK_THROWS_AS(stationary_residual(p, {1.0}), HypothesisError);
}

TEST_CASE("energy, partial energies, norm") {
    const ModelParams p(2.0, 2.0);
    const ShellVector u = {1.0, 2.0, 3.0};
    const auto [e, diss] = energy_and_dissipation(p, u);
    CHECK(e == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(diss == doctest::Approx(4.0 + 16.0 * 4.0 + 64.0 * 9.0).epsilon(1e-15));
    const std::vector<double> pe = partial_energies(u);
    REQUIRE(pe.size() == 3);
    CHECK(pe[0] == 1.0);
    CHECK(pe[1] == 5.0);
    CHECK(pe[2] == 14.0);
    CHECK(l2_norm(u) == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));
}

TEST_CASE("require_finite flags bad entries") {
    CHECK_THROWS_AS(require_finite({1.0, std::nan("")}, "test"), InvalidStateError);
    CHECK_NOTHROW(require_finite({1.0, -2.0}, "test"));
}
