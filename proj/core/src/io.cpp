#include "dyadic/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dyadic {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    if (ec != std::errc{}) throw IoError("format_double: conversion failed");
    return std::string(buf, end);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(std::string_view data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    if (!f && !f.eof()) throw IoError("read failed: " + path.string());
    return std::move(ss).str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (int n = 1; n <= traj.n_modes(); ++n) out += ",u_" + std::to_string(n);
    out += '\n';
    for (double t : traj.sample_grid()) {
        out += format_double(t);
        const ShellVector u = traj.at(t);
        for (double v : u) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json trajectory_json(const Trajectory& traj) {
    nlohmann::json j;
    j["lambda"] = traj.params().lambda();
    j["beta"] = traj.params().beta();
    j["kind"] = (traj.kind() == SystemKind::Viscous) ? "viscous" : "inviscid";
    j["n_modes"] = traj.n_modes();
    j["blown_up"] = traj.blown_up();
    if (traj.blown_up()) j["blowup_time"] = traj.blowup_time();
    j["times"] = nlohmann::json::array();
    j["states"] = nlohmann::json::array();
    for (double t : traj.sample_grid()) {
        j["times"].push_back(t);
        j["states"].push_back(traj.at(t));
    }
    return j;
}

std::string energy_csv(const EnergyReport& rep) {
    std::string out = "t,energy,cumulative_dissipation,identity_residual,leray_hopf_slack\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        out += format_double(rep.times[i]);
        out += ',';
        out += format_double(rep.energy[i]);
        out += ',';
        out += format_double(rep.cumulative_dissipation[i]);
        out += ',';
        out += format_double(rep.identity_residual[i]);
        out += ',';
        out += format_double(rep.leray_hopf_slack[i]);
        out += '\n';
    }
    return out;
}

namespace {

double envelope_value(const StationarySolution& sol, int k) {
    switch (sol.regime) {
        case Regime::Subcritical:
            return 1.0 / (1.0 - sol.u_param);
        case Regime::Critical:
            return static_cast<double>(k);
        case Regime::Supercritical:
            if (k < 2) return 0.0;
            return (std::pow(sol.u_param, (k - 1) / 3.0) - 1.0) /
                   (std::cbrt(sol.u_param) - 1.0);
    }
    return 0.0;
}

}  // namespace

std::string stationary_csv(const StationarySolution& sol) {
    std::string out = "k,b_k,a_k,envelope_k\n";
    for (std::size_t i = 0; i < sol.b.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        out += std::to_string(k);
        out += ',';
        out += format_double(sol.b[i]);
        out += ',';
        out += format_double(sol.a[i]);
        out += ',';
        out += format_double(envelope_value(sol, k));
        out += '\n';
    }
    return out;
}

nlohmann::json stationary_json(const StationarySolution& sol, const ModelParams& params,
                               const ShootResult* shot) {
    nlohmann::json j;
    j["lambda"] = params.lambda();
    j["beta"] = params.beta();
    j["u"] = sol.u_param;
    switch (sol.regime) {
        case Regime::Subcritical: j["regime"] = "subcritical"; break;
        case Regime::Critical: j["regime"] = "critical"; break;
        case Regime::Supercritical: j["regime"] = "supercritical"; break;
    }
    j["prefix_length_exact"] = sol.prefix_length_exact;
    j["b"] = sol.b;
    j["a"] = sol.a;
    j["envelope_constant"] = sol.envelope_constant;
    if (shot) {
        j["shoot"] = {{"parameter", shot->parameter},
                      {"bracket_lo", shot->bracket_lo},
                      {"bracket_hi", shot->bracket_hi},
                      {"iterations", shot->iterations},
                      {"marginal_regime", shot->marginal_regime}};
    }
    const StationaryResidual res = stationary_residual(params, sol.a);
    j["residual"] = {{"max_absolute", res.max_absolute},
                     {"max_relative", res.max_relative}};
    if (sol.regime == Regime::Supercritical) {
        // e_n = -a_n lambda^(beta n / 3), the normalization with a positive limit
        std::vector<double> e(sol.a.size());
        for (std::size_t i = 0; i < sol.a.size(); ++i)
            e[i] = -sol.a[i] * std::pow(params.lambda(),
                                        params.beta() * (static_cast<double>(i) + 1.0) / 3.0);
        j["e_normalization"] = e;
    }
    return j;
}

std::string selfsimilar_csv(const SelfSimilarSolution& sol, const BlowupReport& rep) {
    std::string out = "t,n,analytic,simulated,abs_diff\n";
    const int n_modes = static_cast<int>(sol.profile.size());
    for (const BlowupRow& row : rep.rows) {
        const ShellVector v = sol.analytic_state(row.t);
        const bool simulated = rep.trajectory && row.simulated_norm.has_value();
        ShellVector u;
        if (simulated) u = rep.trajectory->at(std::min(row.t, rep.trajectory->t_end()));
        for (int n = 1; n <= n_modes; ++n) {
            out += format_double(row.t);
            out += ',';
            out += std::to_string(n);
            out += ',';
            out += format_double(v[n - 1]);
            out += ',';
            if (simulated) {
                out += format_double(u[n - 1]);
                out += ',';
                out += format_double(std::abs(u[n - 1] - v[n - 1]));
            } else {
                out += ',';  // simulated columns empty past the time cap
            }
            out += '\n';
        }
    }
    return out;
}

std::string psi_csv(const PsiMetric& psi) {
    std::string out = "t,psi\n";
    for (std::size_t i = 0; i < psi.times.size(); ++i) {
        out += format_double(psi.times[i]);
        out += ',';
        out += format_double(psi.values[i]);
        out += '\n';
    }
    return out;
}

std::string level_set_csv(const std::vector<LevelSetStats>& stats) {
    std::string out = "mode,level,measure_a,measure_b,bound_a,bound_b,ok\n";
    for (const LevelSetStats& s : stats) {
        const bool ok = (s.measure_a <= s.bound_a) && (s.measure_b <= s.bound_b);
        out += std::to_string(s.mode);
        out += ',';
        out += format_double(s.level);
        out += ',';
        out += format_double(s.measure_a);
        out += ',';
        out += format_double(s.measure_b);
        out += ',';
        out += format_double(s.bound_a);
        out += ',';
        out += format_double(s.bound_b);
        out += ',';
        out += ok ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string cube_integral_csv(const std::vector<CubeIntegralReport>& reps) {
    std::string out = "mode,integral,tail_bound,paper_bound,ok\n";
    for (const CubeIntegralReport& r : reps) {
        out += std::to_string(r.mode);
        out += ',';
        out += format_double(r.integral_value);
        out += ',';
        out += format_double(r.tail_bound);
        out += ',';
        out += format_double(r.paper_bound);
        out += ',';
        out += r.within_bound ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace dyadic
