#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/model.hpp"
#include "kostin/propagator.hpp"
#include "kostin/trajectory.hpp"

namespace kostin {

/// Configuration error carrying the offending key and 1-based line (0 when not line-bound).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string key, std::size_t line)
        : std::runtime_error(what), key_(std::move(key)), line_(line) {}
    const std::string& key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string key_;
    std::size_t line_;
};

struct PipelineFlags {
    bool trajectory = true;
    bool packet = false;
    bool pde = false;
    bool kernel = false;
};

struct KernelSettings {
    double t = 0.5;
    SpatialGrid x_grid{-4.0, 0.1, 81};
    SpatialGrid x0_grid{-4.0, 0.1, 81};
    QuadratureSpec quadrature;
    FamilyCentering centering = FamilyCentering::SourcePoint;
    /// Initial velocity of the family member used for the reconstruction check.
    double v0_star = 0.0;
    /// Second family width for the a0-insensitivity check (free, nu = 0 only).
    std::optional<double> alt_a0;
    /// Small times for the causality probe, in decreasing order.
    std::vector<double> causality_times;
    std::optional<SpatialGrid> causality_x_grid;
    std::optional<SpatialGrid> causality_x0_grid;
    std::optional<QuadratureSpec> causality_quadrature;
};

inline constexpr double kUnchecked = std::numeric_limits<double>::infinity();

/// Thresholds enforced by the validation reports (value <= tolerance passes).
struct Tolerances {
    double residual = 1e-10;
    double closed_form = 1e-8;
    double norm = 1e-8;
    double continuity = 1e-4;
    double pde_norm = 1e-9;       ///< per 1000 steps
    double ansatz_pde = kUnchecked;
    double pde_order = kUnchecked;  ///< |log2(error ratio) - 2| under dt halving
    double pde_moments = kUnchecked;
    double kernel_reconstruction = kUnchecked;
    double free_kernel = 1e-3;
    double kernel_flatness = 1e-6;
    double a0_sensitivity = 1e-3;
    double coherent_peak = 5e-3;
    double causality = kUnchecked;
    double reduction = 1e-12;
};

struct Scenario {
    std::string name = "unnamed";
    /// Free-text qualifier attached to the reports, e.g. "linearized-regime only".
    std::string label;
    PhysicalSystem system;
    PotentialModel potential;
    InitialConditions initial;
    double t_final = 1.0;
    double dt_ode = 1e-3;
    double dt_pde = 1e-3;
    /// Spacing of stored snapshots; a whole multiple of dt_ode and dt_pde.
    double snapshot_interval = 0.5;
    SpatialGrid grid{-20.0, 40.0 / 2048.0, 2048};
    /// Spacing of the grid (same extent as `grid`) used for the continuity residual.
    double continuity_dx = 0.01;
    KernelSettings kernel;
    PipelineFlags pipelines;
    Tolerances tolerance;
    std::filesystem::path output_dir = "out";
};

/// Parse flat "section.key = value" text. Unknown or repeated keys are errors.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Throws ConfigError (line 0) if the selected pipelines cannot run.
void check_scenario(const Scenario& s);

struct BundledScenario {
    std::string_view name;
    std::string_view config;
};

const std::vector<BundledScenario>& bundled_scenarios();
std::vector<std::string> list_scenarios();
/// Config text of a bundled scenario, or nullopt.
std::optional<std::string_view> find_bundled(std::string_view name);

}  // namespace kostin
