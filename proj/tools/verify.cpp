#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "gcomp/config.hpp"
#include "gcomp/error.hpp"
#include "gcomp/report.hpp"

namespace {

struct Flags {
    std::string config;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::string out;
    unsigned workers = 1;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    gcomp::require(static_cast<bool>(file), gcomp::ErrorCode::InvalidValue, "cannot write " + path);
    file << content;
    gcomp::require(static_cast<bool>(file), gcomp::ErrorCode::InvalidValue, "failed writing " + path);
}

int run(const std::string& experiment, const Flags& flags, const CLI::App& sub) {
    gcomp::ExperimentConfig config = gcomp::parse_config(flags.config, experiment);
    if (sub.count("--seed") > 0) {
        config.seed = flags.seed;
    }
    if (sub.count("--samples") > 0) {
        gcomp::require(flags.samples >= 2, gcomp::ErrorCode::InvalidValue, "field `samples`: need at least 2");
        config.samples = flags.samples;
    }
    gcomp::RunOptions options;
    options.exec.workers = flags.workers;
    const gcomp::RunReport report = gcomp::run_experiment(config, options);
    if (flags.out.empty()) {
        std::cout << report.dump();
    } else {
        write_file(flags.out, report.dump());
    }
    if (!report.csv_path.empty()) {
        write_file(report.csv_path, report.csv_content);
    }
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo verification of Gaussian comparison inequalities"};
    app.set_version_flag("--version", std::string(GCOMP_VERSION));
    app.require_subcommand(1);

    Flags flags;
    std::string chosen;
    for (const auto name : gcomp::kExperiments) {
        auto* sub = app.add_subcommand(std::string(name), "run the " + std::string(name) + " experiment");
        sub->add_option("--config", flags.config, "JSON config file")->required();
        sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
        sub->add_option("--samples", flags.samples, "Monte Carlo sample count (overrides the config)");
        sub->add_option("--out", flags.out, "report path (default: stdout)");
        sub->add_option("--workers", flags.workers, "worker threads")->check(CLI::Range(1U, 1024U));
        sub->callback([&chosen, name] { chosen = std::string(name); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gcomp::kExitConfigError;
    }

    try {
        return run(chosen, flags, *app.get_subcommand(chosen));
    } catch (const gcomp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gcomp::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gcomp::kExitNumericError;
    }
}
