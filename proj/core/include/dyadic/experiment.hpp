#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadic/integrator.hpp"

namespace dyadic {

inline constexpr const char* kToolVersion = "0.1.0";
/// Output directory override honored by the CLI (between the config value and
/// the --out flag, which wins).
inline constexpr const char* kOutputDirEnvVar = "DYADIC_LAB_OUT";

enum class Command {
    Simulate,
    Verify,
    Estimate,
    Stationary,
    SelfSimilar,
    NonuniquenessDemo,
    Sweep,
};

Command parse_command(const std::string& name);
std::string command_name(Command cmd);

enum class OutputFormat { Csv, Json };

/// Initial-data generator. The envelope kind produces
/// a_n = s * eps_init * lambda^((2-beta) n) with a cyclic sign pattern,
/// matching the admissible smallness class; random data require a seed.
struct DataSpec {
    enum class Kind { Explicit, Geometric, Envelope, Random };
    Kind kind = Kind::Envelope;
    std::vector<double> values;         ///< explicit entries, zero-padded to N
    double amplitude = 1.0;             ///< geometric A (a_n = A r^n) or random half-range
    double ratio = 0.5;                 ///< geometric ratio r
    double scale = 0.9;                 ///< envelope multiplier s (fraction of eps_init)
    std::string signs = "+";            ///< envelope sign pattern, cycled ('+'/'-')
    std::optional<std::uint64_t> seed;  ///< mandatory for random data
};

ShellVector make_initial_data(const ModelParams& params, const DataSpec& spec, int n_modes);

struct ExperimentConfig {
    Command command = Command::Simulate;
    double lambda = 2.0;
    double beta = 2.5;
    int n_modes = 12;
    SystemKind kind = SystemKind::Viscous;
    DataSpec data;
    IntegratorConfig integrator;

    // verify
    std::optional<double> eps2;
    std::optional<double> eps3;
    int first_mode = 1;

    // estimate
    std::vector<int> modes;      ///< default 4..min(10, N-2)
    std::vector<double> levels;  ///< default geometric ladder below the data norm

    // stationary / nonuniqueness-demo
    int target_len = 30;
    std::vector<int> limit_lengths;

    // selfsimilar
    int prefix_len = 20;
    std::vector<double> times;  ///< default {0, 0.1, ..., 0.9, 1 - 1e-3}

    // sweep
    std::vector<double> lambda_grid;
    std::vector<double> beta_grid;
    int workers = 1;

    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::Csv;

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

struct ManifestFile {
    std::string name;
    std::string digest;  ///< FNV-1a 64 of the file content
};

struct RunManifest {
    nlohmann::json config_echo;
    std::string tool_version = kToolVersion;
    double wall_time_ms = 0.0;
    std::map<std::string, std::string> verdicts;  ///< "pass", "fail", or a detail string
    std::vector<ManifestFile> files;
    bool all_passed = true;

    nlohmann::json to_json() const;
};

/// Execute the configured experiment: write the artifacts plus manifest.json
/// into the output directory and return the manifest. Asserted-check failures
/// are reported through all_passed, not exceptions; hypothesis, numerical and
/// I/O errors propagate as dyadic::Error.
RunManifest run(const ExperimentConfig& config);

}  // namespace dyadic
