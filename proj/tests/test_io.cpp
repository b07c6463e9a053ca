#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "dyadic/io.hpp"

using namespace dyadic;

TEST_CASE("format_double is round-trippable") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::ldexp(mant(rng), expo(rng));
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(digest_hex("") == "cbf29ce484222325");
}

TEST_CASE("text file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "dyadic_io_test.txt";
    const std::string content = "line1\nline2,0.5\n";
    write_text_file(path, content);
    CHECK(read_text_file(path) == content);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_text_file(path), IoError);
}

TEST_CASE("trajectory CSV shape") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    cfg.t_end = 0.5;
    cfg.dense_samples_per_unit_time = 32;
    const Trajectory traj = integrate(p, {0.2, 0.1, 0.05}, cfg, SystemKind::Viscous);
    const std::string csv = trajectory_csv(traj);
    std::istringstream ss(csv);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,u_1,u_2,u_3");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(ss, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == traj.sample_grid().size());
}

TEST_CASE("trajectory JSON carries parameters and states") {
    const ModelParams p(2.0, 2.5);
    IntegratorConfig cfg;
    cfg.t_end = 0.25;
    const Trajectory traj = integrate(p, {0.1, 0.1}, cfg, SystemKind::Viscous);
    const nlohmann::json j = trajectory_json(traj);
    CHECK(j["lambda"] == 2.0);
    CHECK(j["kind"] == "viscous");
    CHECK(j["n_modes"] == 2);
    CHECK(j["times"].size() == j["states"].size());
}

TEST_CASE("stationary CSV and JSON") {
    const ModelParams p(2.0, 2.5);
    const ShootResult shot = shoot(p, 20);
    StationarySolution sol = reverse_to_solution(shot.aux, p);
    sol.shoot_parameter = shot.parameter;

    const std::string csv = stationary_csv(sol);
    std::istringstream ss(csv);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "k,b_k,a_k,envelope_k");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == sol.b.size());

    const nlohmann::json j = stationary_json(sol, p, &shot);
    CHECK(j["regime"] == "subcritical");
    CHECK(j["b"].size() == sol.b.size());
    CHECK(j["shoot"]["parameter"] == shot.parameter);
    CHECK(j["residual"]["max_relative"].get<double>() < 1e-9);
    CHECK_FALSE(j.contains("e_normalization"));

    const ModelParams ps(2.0, 3.5);
    const StationarySolution sup = solve_stationary(ps, 15);
    const nlohmann::json js = stationary_json(sup, ps, nullptr);
    REQUIRE(js.contains("e_normalization"));
    // e_n = -a_n lambda^(beta n/3) = b_n lambda^(-beta n/3) lambda^(... ) stays positive
    for (double e : js["e_normalization"]) CHECK(e > 0.0);
}

TEST_CASE("psi and level-set CSV headers") {
    PsiMetric psi;
    psi.times = {0.0, 1.0};
    psi.values = {0.0, 0.5};
    const std::string pcsv = psi_csv(psi);
    CHECK(pcsv.rfind("t,psi\n", 0) == 0);

    LevelSetStats s;
    s.mode = 3;
    s.level = 0.25;
    s.measure_b = 0.5;
    s.bound_b = 1.0;
    s.bound_a = 1.0;
    const std::string lcsv = level_set_csv({s});
    CHECK(lcsv.rfind("mode,level,measure_a,measure_b,bound_a,bound_b,ok\n", 0) == 0);
    CHECK(lcsv.find(",1\n") != std::string::npos);
}
