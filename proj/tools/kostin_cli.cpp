#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kostin/run.hpp"
#include "kostin/scenario.hpp"
#include "kostin/validate.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kFailedChecks = 1, kConfigError = 2, kPipelineError = 3 };

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// A path that exists wins over a bundled scenario of the same name.
kostin::Scenario resolve(const std::string& arg, std::string& source) {
    if (fs::exists(arg)) {
        source = arg;
        return kostin::load_scenario(arg);
    }
    if (auto text = kostin::find_bundled(arg)) {
        source = "bundled:" + arg;
        return kostin::parse_scenario(*text);
    }
    throw kostin::ConfigError("no config file or bundled scenario named '" + arg + "'", "", 0);
}

int run(const std::string& arg, const std::string& out_override, bool quiet) {
    kostin::Scenario scenario;
    std::string source;
    try {
        scenario = resolve(arg, source);
    } catch (const kostin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    const fs::path out = out_override.empty() ? scenario.output_dir : fs::path(out_override);

    kostin::Progress progress;
    if (!quiet) progress = [&](std::string_view stage) { std::cerr << scenario.name << ": " << stage << '\n'; };

    const auto started = utc_timestamp();
    kostin::RunResult result;
    try {
        result = kostin::run_scenario(scenario, progress);
        kostin::write_artifacts(result, out);
        std::ofstream meta(out / "run_metadata.txt");
        meta << "scenario = " << scenario.name << '\n'
             << "source = " << source << '\n'
             << "started = " << started << '\n'
             << "finished = " << utc_timestamp() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPipelineError;
    }

    if (!quiet) {
        kostin::write_reports_text(std::cout, result.reports);
        std::cout << "artifacts in " << out.string() << '\n';
    }
    return result.all_pass() ? kOk : kFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized Kostin packet dynamics: trajectories, packets, kernels and a PDE check"};
    app.require_subcommand(1);

    std::string out_dir;
    bool quiet = false;
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_flag("--quiet", quiet, "Suppress progress and report text");

    std::string config;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario config file or bundled scenario");
    run_cmd->add_option("config", config, "Config path or bundled scenario name")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    run_cmd->add_flag("--quiet", quiet, "Suppress progress and report text");

    auto* list_cmd = app.add_subcommand("list", "List bundled scenarios");

    std::string show_name;
    auto* show_cmd = app.add_subcommand("show", "Print the config of a bundled scenario");
    show_cmd->add_option("name", show_name, "Bundled scenario name")->required();

    CLI11_PARSE(app, argc, argv);

    if (*list_cmd) {
        for (const auto& name : kostin::list_scenarios()) std::cout << name << '\n';
        return kOk;
    }
    if (*show_cmd) {
        auto text = kostin::find_bundled(show_name);
        if (!text) {
            std::cerr << "no bundled scenario named '" << show_name << "'\n";
            return kConfigError;
        }
        std::cout << *text;
        return kOk;
    }
    return run(config, out_dir, quiet);
}
