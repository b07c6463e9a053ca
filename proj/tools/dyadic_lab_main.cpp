#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dyadic/experiment.hpp"

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  all checks passed\n"
    "  2  hypothesis violated (input outside a theorem's assumptions)\n"
    "  3  numerical failure (stiffness breakdown, bracket collapse, overflow)\n"
    "  4  an asserted check failed\n"
    "  5  I/O error\n";

struct CliOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
};

void add_common_options(CLI::App* app, CliOptions& opt) {
    app->add_option("--config", opt.config_path, "experiment configuration (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--out", opt.out_dir, "output directory (overrides config and env)");
    app->add_option("--workers", opt.workers, "sweep worker count");
    app->add_option("--seed", opt.seed, "seed override for random initial data");
    app->add_option("--format", opt.format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
}

int run_cli(const CliOptions& opt, std::optional<dyadic::Command> forced_command) {
    dyadic::ExperimentConfig cfg = dyadic::ExperimentConfig::load(opt.config_path);
    if (forced_command) cfg.command = *forced_command;

    if (opt.out_dir) {
        cfg.out_dir = *opt.out_dir;
    } else if (const char* env = std::getenv(dyadic::kOutputDirEnvVar)) {
        cfg.out_dir = env;
    }
    if (opt.workers) cfg.workers = *opt.workers;
    if (opt.seed) cfg.data.seed = *opt.seed;
    if (opt.format)
        cfg.format = (*opt.format == "json") ? dyadic::OutputFormat::Json
                                             : dyadic::OutputFormat::Csv;

    const dyadic::RunManifest manifest = dyadic::run(cfg);
    for (const auto& [name, verdict] : manifest.verdicts)
        std::cout << name << ": " << verdict << "\n";
    std::cout << "artifacts: " << cfg.out_dir.string() << " (" << manifest.files.size()
              << " files)\n";
    if (!manifest.all_passed) {
        std::cerr << "one or more asserted checks failed\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic-lab: numerical laboratory for the dyadic shell model"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(0, 1);

    CliOptions opt;
    std::optional<dyadic::Command> forced;
    const std::pair<const char*, dyadic::Command> commands[] = {
        {"simulate", dyadic::Command::Simulate},
        {"verify", dyadic::Command::Verify},
        {"estimate", dyadic::Command::Estimate},
        {"stationary", dyadic::Command::Stationary},
        {"selfsimilar", dyadic::Command::SelfSimilar},
        {"nonuniqueness-demo", dyadic::Command::NonuniquenessDemo},
        {"sweep", dyadic::Command::Sweep},
    };
    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->footer(kExitCodeHelp);
        CliOptions* o = &opt;
        add_common_options(sub, *o);
        dyadic::Command c = cmd;
        sub->callback([&forced, c] { forced = c; });
    }
    // the bare form takes the command from the config file
    add_common_options(&app, opt);
    app.get_option("--config")->required(false);

    CLI11_PARSE(app, argc, argv);

    if (opt.config_path.empty()) {
        std::cerr << "error: --config is required\n" << app.help() << "\n";
        return 1;
    }

    try {
        return run_cli(opt, forced);
    } catch (const dyadic::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
