#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/propagator.hpp"
#include "kostin/scenario.hpp"
#include "kostin/trajectory.hpp"
#include "kostin/validate.hpp"

namespace kostin {

struct RunResult {
    Scenario scenario;
    std::optional<TrajectorySeries> series;
    std::vector<ComplexGridField> packet_snapshots;
    std::vector<ComplexGridField> pde_snapshots;
    std::optional<PropagatorKernel> kernel;
    std::vector<ComparisonReport> reports;

    bool all_pass() const;
};

using Progress = std::function<void(std::string_view)>;

/// Runs the selected pipelines and their validations. Errors from the
/// pipelines are rethrown as std::runtime_error prefixed with the scenario name.
RunResult run_scenario(const Scenario& s, const Progress& progress = {});

/// Writes trajectory.csv, packet_NNN.csv, pde_NNN.csv, kernel.csv, report.csv
/// and report.txt into `dir` (created if needed). Returns the paths written.
std::vector<std::filesystem::path> write_artifacts(const RunResult& r, const std::filesystem::path& dir);

}  // namespace kostin
