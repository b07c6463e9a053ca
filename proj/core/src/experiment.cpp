#include "dyadic/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "dyadic/checks.hpp"
#include "dyadic/estimates.hpp"
#include "dyadic/io.hpp"
#include "dyadic/selfsimilar.hpp"
#include "dyadic/stationary.hpp"

namespace dyadic {

Command parse_command(const std::string& name) {
    if (name == "simulate") return Command::Simulate;
    if (name == "verify") return Command::Verify;
    if (name == "estimate") return Command::Estimate;
    if (name == "stationary") return Command::Stationary;
    if (name == "selfsimilar") return Command::SelfSimilar;
    if (name == "nonuniqueness-demo") return Command::NonuniquenessDemo;
    if (name == "sweep") return Command::Sweep;
    throw HypothesisError("unknown command: " + name);
}

std::string command_name(Command cmd) {
    switch (cmd) {
        case Command::Simulate: return "simulate";
        case Command::Verify: return "verify";
        case Command::Estimate: return "estimate";
        case Command::Stationary: return "stationary";
        case Command::SelfSimilar: return "selfsimilar";
        case Command::NonuniquenessDemo: return "nonuniqueness-demo";
        case Command::Sweep: return "sweep";
    }
    throw InvalidStateError("unreachable command");
}

ShellVector make_initial_data(const ModelParams& params, const DataSpec& spec, int n_modes) {
    if (n_modes < 1) throw HypothesisError("make_initial_data: need n_modes >= 1");
    ShellVector a(static_cast<std::size_t>(n_modes), 0.0);
    switch (spec.kind) {
        case DataSpec::Kind::Explicit:
            for (int i = 0; i < n_modes && i < static_cast<int>(spec.values.size()); ++i)
                a[i] = spec.values[i];
            break;
        case DataSpec::Kind::Geometric:
            for (int n = 1; n <= n_modes; ++n)
                a[n - 1] = spec.amplitude * std::pow(spec.ratio, n);
            break;
        case DataSpec::Kind::Envelope: {
            if (spec.signs.empty())
                throw HypothesisError("make_initial_data: empty sign pattern");
            const double eps = spec.scale * compute_constants(params).eps_init;
            for (int n = 1; n <= n_modes; ++n) {
                const char s = spec.signs[(n - 1) % spec.signs.size()];
                if (s != '+' && s != '-')
                    throw HypothesisError("make_initial_data: sign pattern must use '+'/'-'");
                a[n - 1] = (s == '-' ? -1.0 : 1.0) * eps * params.envelope_scale(n);
            }
            break;
        }
        case DataSpec::Kind::Random: {
            if (!spec.seed)
                throw HypothesisError("make_initial_data: random data require a seed");
            std::mt19937_64 rng(*spec.seed);
            for (int i = 0; i < n_modes; ++i) {
                const double u01 = std::ldexp(static_cast<double>(rng() >> 11), -53);
                a[i] = spec.amplitude * (2.0 * u01 - 1.0);
            }
            break;
        }
    }
    require_finite(a, "make_initial_data");
    return a;
}

namespace {

DataSpec data_spec_from_json(const nlohmann::json& j) {
    DataSpec d;
    const std::string type = j.value("type", "envelope");
    if (type == "explicit") {
        d.kind = DataSpec::Kind::Explicit;
        d.values = j.at("values").get<std::vector<double>>();
    } else if (type == "geometric") {
        d.kind = DataSpec::Kind::Geometric;
        d.amplitude = j.value("amplitude", 1.0);
        d.ratio = j.value("ratio", 0.5);
    } else if (type == "envelope") {
        d.kind = DataSpec::Kind::Envelope;
        d.scale = j.value("scale", 0.9);
        d.signs = j.value("signs", std::string("+"));
    } else if (type == "random") {
        d.kind = DataSpec::Kind::Random;
        d.amplitude = j.value("amplitude", 1.0);
        if (!j.contains("seed"))
            throw HypothesisError("config: random data require a seed");
        d.seed = j.at("seed").get<std::uint64_t>();
    } else {
        throw HypothesisError("config: unknown data type: " + type);
    }
    return d;
}

nlohmann::json data_spec_to_json(const DataSpec& d) {
    nlohmann::json j;
    switch (d.kind) {
        case DataSpec::Kind::Explicit:
            j["type"] = "explicit";
            j["values"] = d.values;
            break;
        case DataSpec::Kind::Geometric:
            j["type"] = "geometric";
            j["amplitude"] = d.amplitude;
            j["ratio"] = d.ratio;
            break;
        case DataSpec::Kind::Envelope:
            j["type"] = "envelope";
            j["scale"] = d.scale;
            j["signs"] = d.signs;
            break;
        case DataSpec::Kind::Random:
            j["type"] = "random";
            j["amplitude"] = d.amplitude;
            j["seed"] = *d.seed;
            break;
    }
    return j;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.command = parse_command(j.value("command", std::string("simulate")));
    c.lambda = j.value("lambda", 2.0);
    c.beta = j.value("beta", 2.5);
    c.n_modes = j.value("n_modes", 12);
    const std::string system = j.value("system", std::string("viscous"));
    if (system == "viscous")
        c.kind = SystemKind::Viscous;
    else if (system == "inviscid")
        c.kind = SystemKind::Inviscid;
    else
        throw HypothesisError("config: unknown system: " + system);
    if (j.contains("data")) c.data = data_spec_from_json(j.at("data"));
    if (j.contains("integrator")) {
        const nlohmann::json& ji = j.at("integrator");
        c.integrator.t_end = ji.value("t_end", c.integrator.t_end);
        c.integrator.rel_tol = ji.value("rel_tol", c.integrator.rel_tol);
        c.integrator.abs_tol = ji.value("abs_tol", c.integrator.abs_tol);
        c.integrator.max_step = ji.value("max_step", c.integrator.max_step);
        c.integrator.dense_samples_per_unit_time =
            ji.value("dense_samples_per_unit_time", c.integrator.dense_samples_per_unit_time);
        const std::string scheme = ji.value("scheme", std::string("ifrk4"));
        if (scheme == "ifrk4")
            c.integrator.scheme = Scheme::ExponentialIfRk4;
        else if (scheme == "rk45")
            c.integrator.scheme = Scheme::ClassicalRk45;
        else
            throw HypothesisError("config: unknown scheme: " + scheme);
    }
    if (j.contains("checks")) {
        const nlohmann::json& jc = j.at("checks");
        if (jc.contains("eps2")) c.eps2 = jc.at("eps2").get<double>();
        if (jc.contains("eps3")) c.eps3 = jc.at("eps3").get<double>();
        c.first_mode = jc.value("first_mode", 1);
    }
    if (j.contains("estimate")) {
        const nlohmann::json& je = j.at("estimate");
        c.modes = je.value("modes", c.modes);
        c.levels = je.value("levels", c.levels);
    }
    if (j.contains("stationary")) {
        const nlohmann::json& js = j.at("stationary");
        c.target_len = js.value("target_len", c.target_len);
        c.limit_lengths = js.value("limit_lengths", c.limit_lengths);
    }
    if (j.contains("selfsimilar")) {
        const nlohmann::json& js = j.at("selfsimilar");
        c.prefix_len = js.value("prefix_len", c.prefix_len);
        c.times = js.value("times", c.times);
    }
    if (j.contains("sweep")) {
        const nlohmann::json& js = j.at("sweep");
        c.lambda_grid = js.value("lambda", c.lambda_grid);
        c.beta_grid = js.value("beta", c.beta_grid);
        c.workers = js.value("workers", 1);
    }
    if (j.contains("output")) {
        const nlohmann::json& jo = j.at("output");
        c.out_dir = jo.value("dir", std::string("out"));
        const std::string fmt = jo.value("format", std::string("csv"));
        if (fmt == "csv")
            c.format = OutputFormat::Csv;
        else if (fmt == "json")
            c.format = OutputFormat::Json;
        else
            throw HypothesisError("config: unknown format: " + fmt);
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("config parse error in " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command_name(command);
    j["lambda"] = lambda;
    j["beta"] = beta;
    j["n_modes"] = n_modes;
    j["system"] = (kind == SystemKind::Viscous) ? "viscous" : "inviscid";
    j["data"] = data_spec_to_json(data);
    j["integrator"] = {
        {"t_end", integrator.t_end},
        {"rel_tol", integrator.rel_tol},
        {"abs_tol", integrator.abs_tol},
        {"max_step", integrator.max_step},
        {"dense_samples_per_unit_time", integrator.dense_samples_per_unit_time},
        {"scheme", integrator.scheme == Scheme::ExponentialIfRk4 ? "ifrk4" : "rk45"},
    };
    nlohmann::json jc;
    if (eps2) jc["eps2"] = *eps2;
    if (eps3) jc["eps3"] = *eps3;
    jc["first_mode"] = first_mode;
    j["checks"] = jc;
    j["estimate"] = {{"modes", modes}, {"levels", levels}};
    j["stationary"] = {{"target_len", target_len}, {"limit_lengths", limit_lengths}};
    j["selfsimilar"] = {{"prefix_len", prefix_len}, {"times", times}};
    j["sweep"] = {{"lambda", lambda_grid}, {"beta", beta_grid}, {"workers", workers}};
    j["output"] = {{"dir", out_dir.string()},
                   {"format", format == OutputFormat::Csv ? "csv" : "json"}};
    return j;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["config"] = config_echo;
    j["wall_time_ms"] = wall_time_ms;
    j["verdicts"] = verdicts;
    j["all_passed"] = all_passed;
    j["files"] = nlohmann::json::array();
    for (const ManifestFile& f : files)
        j["files"].push_back({{"name", f.name}, {"digest", f.digest}});
    return j;
}

namespace {

struct Emitter {
    std::filesystem::path dir;
    RunManifest* manifest;

    void emit(const std::string& name, std::string_view content) const {
        write_text_file(dir / name, content);
        manifest->files.push_back({name, digest_hex(content)});
    }
    void emit_json(const std::string& name, const nlohmann::json& j) const {
        emit(name, j.dump(2) + "\n");
    }
};

void record(RunManifest& m, const std::string& name, bool ok) {
    m.verdicts[name] = ok ? "pass" : "fail";
    if (!ok) m.all_passed = false;
}

void emit_trajectory(const Emitter& em, const ExperimentConfig& cfg, const Trajectory& traj) {
    if (cfg.format == OutputFormat::Json)
        em.emit_json("trajectory.json", trajectory_json(traj));
    else
        em.emit("trajectory.csv", trajectory_csv(traj));
}

void run_simulate(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                  RunManifest& man) {
    const ShellVector a = make_initial_data(params, cfg.data, cfg.n_modes);
    const Trajectory traj = integrate(params, a, cfg.integrator, cfg.kind);
    emit_trajectory(em, cfg, traj);
    man.verdicts["blown_up"] = traj.blown_up() ? "yes" : "no";
    if (cfg.kind == SystemKind::Viscous && !traj.blown_up()) {
        const EnergyReport er = energy_report(traj);
        em.emit("energy.csv", energy_csv(er));
        record(man, "energy_identity", er.max_identity_residual < 1e-6);
    }
    record(man, "completed", true);
}

void run_verify(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                RunManifest& man) {
    const PaperConstants pc = compute_constants(params);
    const double eps2 = cfg.eps2.value_or(0.9 * pc.eps2_max);
    const double eps3 = cfg.eps3.value_or(0.9 * pc.eps3_max);

    const ShellVector a = make_initial_data(params, cfg.data, cfg.n_modes);
    const Trajectory traj = integrate(params, a, cfg.integrator, SystemKind::Viscous);
    emit_trajectory(em, cfg, traj);

    const SignReport sign = check_sign_structure(traj);
    record(man, "sign_structure", sign.all_ok);

    const LowerBoundReport lower = check_lower_bound(traj, eps2, cfg.first_mode);
    record(man, "lower_bound", lower.ok);

    const EnvelopeReport env = check_envelope(traj, eps3, cfg.first_mode);
    record(man, "envelope", env.ok);

    const EnergyReport er = energy_report(traj);
    em.emit("energy.csv", energy_csv(er));
    record(man, "energy_identity", er.max_identity_residual < 1e-6);
    record(man, "leray_hopf", er.min_slack > -1e-6);

    nlohmann::json j;
    j["eps2"] = eps2;
    j["eps3"] = eps3;
    j["sign_ok"] = sign.all_ok;
    j["lower_violations"] = lower.violations;
    j["envelope_violations"] = env.violations;
    j["t_prime"] = env.t_prime;
    j["max_identity_residual"] = er.max_identity_residual;
    em.emit_json("verify.json", j);
}

void run_estimate(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                  RunManifest& man) {
    const ShellVector a = make_initial_data(params, cfg.data, cfg.n_modes);
    const Trajectory traj = integrate(params, a, cfg.integrator, SystemKind::Viscous);

    std::vector<int> modes = cfg.modes;
    if (modes.empty())
        for (int n = 4; n <= std::min(10, cfg.n_modes - 2); ++n) modes.push_back(n);
    std::vector<double> levels = cfg.levels;
    if (levels.empty()) {
        const double top = l2_norm(a);
        for (int k = 1; k <= 10; ++k) levels.push_back(top * std::pow(2.0, -k));
    }

    std::vector<LevelSetStats> stats;
    bool level_ok = true;
    for (int n : modes)
        for (double y : levels) {
            stats.push_back(level_set_measure(traj, n, y));
            const LevelSetStats& s = stats.back();
            if (s.measure_a > s.bound_a || s.measure_b > s.bound_b) level_ok = false;
        }
    em.emit("level_sets.csv", level_set_csv(stats));
    record(man, "level_set_bounds", level_ok);

    std::vector<CubeIntegralReport> cubes;
    bool cube_ok = true;
    for (int n : modes) {
        cubes.push_back(cube_integral(traj, n));
        if (!cubes.back().within_bound) cube_ok = false;
    }
    em.emit("cube_integrals.csv", cube_integral_csv(cubes));
    record(man, "cube_integral_bounds", cube_ok);
}

void run_stationary(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                    RunManifest& man) {
    const ShootResult shot = shoot(params, cfg.target_len);
    const StationarySolution sol = [&] {
        StationarySolution s = reverse_to_solution(shot.aux, params);
        s.shoot_parameter = shot.parameter;
        return s;
    }();

    em.emit("stationary.csv", stationary_csv(sol));
    em.emit_json("stationary.json", stationary_json(sol, params, &shot));

    const StationaryCheckReport check = envelope_check(sol);
    record(man, "stationary_envelope", check.ok);
    const StationaryResidual res = stationary_residual(params, sol.a);
    record(man, "stationary_residual", res.max_relative < 1e-9);

    if (!cfg.limit_lengths.empty()) {
        const LimitTable table = limit_study(params, cfg.limit_lengths);
        std::string csv = "target_len,b1,increment\n";
        for (const LimitRow& row : table.rows) {
            csv += std::to_string(row.target_len);
            csv += ',';
            csv += format_double(row.d1);
            csv += ',';
            if (row.increment) csv += format_double(*row.increment);
            csv += '\n';
        }
        em.emit("limit_study.csv", csv);
        man.verdicts["extrapolated_b1"] = format_double(table.extrapolated_b1);
    }
}

void run_selfsimilar(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                     RunManifest& man) {
    const SelfSimilarSolution sol = build_selfsimilar(params, cfg.prefix_len);
    std::vector<double> times = cfg.times;
    if (times.empty()) {
        for (int k = 0; k <= 9; ++k) times.push_back(0.1 * k);
        times.push_back(kSelfSimilarTimeCap);
    }

    const SelfSimilarResidual res = analytic_residual(sol, times);
    record(man, "analytic_residual", res.max_relative < 1e-10);

    const BlowupReport rep = verify_blowup(sol, times, cfg.integrator);
    em.emit("selfsimilar.csv", selfsimilar_csv(sol, rep));
    record(man, "norms_increasing", rep.norms_increasing);
    man.verdicts["max_interior_diff"] = format_double(rep.max_interior_diff);
}

void run_nonuniqueness(const ExperimentConfig& cfg, const ModelParams& params, const Emitter& em,
                       RunManifest& man) {
    const StationarySolution sol = solve_stationary(params, cfg.target_len);
    em.emit("stationary.csv", stationary_csv(sol));

    const StationaryResidual res = stationary_residual(params, sol.a);
    record(man, "stationary_residual", res.max_relative < 1e-9);

    const Trajectory traj = integrate(params, sol.a, cfg.integrator, SystemKind::Viscous);
    emit_trajectory(em, cfg, traj);

    const int n_cap = static_cast<int>(sol.a.size());
    const PsiMetric psi = psi_metric_constant(traj, sol.a, n_cap);
    em.emit("psi.csv", psi_csv(psi));
    record(man, "psi_separates", psi.final_value > 1e-6);

    const double e0 = energy_and_dissipation(params, sol.a).first;
    const double e1 = energy_and_dissipation(params, traj.states().back()).first;
    record(man, "energy_decays", e1 < 0.99 * e0);
    man.verdicts["psi_final"] = format_double(psi.final_value);
    man.verdicts["energy_loss_fraction"] = format_double(1.0 - e1 / e0);
}

struct SweepRow {
    double lambda = 0.0;
    double beta = 0.0;
    double u = 0.0;
    std::string regime;
    int depth = 0;
    double b1 = 0.0;
    bool envelope_ok = false;
    double max_relative_residual = 0.0;
    std::string error;
};

void run_sweep(const ExperimentConfig& cfg, const Emitter& em, RunManifest& man) {
    struct Point {
        double lambda, beta;
    };
    std::vector<Point> points;
    for (double l : cfg.lambda_grid)
        for (double b : cfg.beta_grid) points.push_back({l, b});

    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
            SweepRow& row = rows[i];
            row.lambda = points[i].lambda;
            row.beta = points[i].beta;
            try {
                const ModelParams p(row.lambda, row.beta);
                row.u = p.u();
                switch (classify_regime(p.u())) {
                    case Regime::Subcritical: row.regime = "subcritical"; break;
                    case Regime::Critical: row.regime = "critical"; break;
                    case Regime::Supercritical: row.regime = "supercritical"; break;
                }
                const StationarySolution sol = solve_stationary(p, cfg.target_len);
                row.depth = sol.prefix_length_exact;
                row.b1 = sol.b.front();
                row.envelope_ok = envelope_check(sol).ok;
                row.max_relative_residual = stationary_residual(p, sol.a).max_relative;
            } catch (const Error& e) {
                row.error = e.what();
            }
        }
    };

    const int n_workers = std::max(1, cfg.workers);
    if (n_workers == 1 || points.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    std::string csv = "lambda,beta,u,regime,depth,b1,envelope_ok,max_relative_residual,error\n";
    bool all_ok = true;
    for (const SweepRow& row : rows) {
        csv += format_double(row.lambda);
        csv += ',';
        csv += format_double(row.beta);
        csv += ',';
        csv += format_double(row.u);
        csv += ',';
        csv += row.regime;
        csv += ',';
        csv += std::to_string(row.depth);
        csv += ',';
        csv += format_double(row.b1);
        csv += ',';
        csv += row.envelope_ok ? '1' : '0';
        csv += ',';
        csv += format_double(row.max_relative_residual);
        csv += ',';
        csv += row.error;
        csv += '\n';
        if (!row.error.empty() || !row.envelope_ok) all_ok = false;
    }
    em.emit("sweep.csv", csv);
    record(man, "sweep_all_points", all_ok || points.empty());
}

}  // namespace

RunManifest run(const ExperimentConfig& config) {
    const auto t_start = std::chrono::steady_clock::now();
    RunManifest man;
    man.config_echo = config.to_json();

    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir.string());

    const Emitter em{config.out_dir, &man};
    const ModelParams params(config.lambda, config.beta);
    switch (config.command) {
        case Command::Simulate: run_simulate(config, params, em, man); break;
        case Command::Verify: run_verify(config, params, em, man); break;
        case Command::Estimate: run_estimate(config, params, em, man); break;
        case Command::Stationary: run_stationary(config, params, em, man); break;
        case Command::SelfSimilar: run_selfsimilar(config, params, em, man); break;
        case Command::NonuniquenessDemo: run_nonuniqueness(config, params, em, man); break;
        case Command::Sweep: run_sweep(config, em, man); break;
    }

    man.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
    write_text_file(config.out_dir / "manifest.json", man.to_json().dump(2) + "\n");
    return man;
}

}  // namespace dyadic
