#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/propagator.hpp"
#include "kostin/scenario.hpp"
#include "kostin/trajectory.hpp"

namespace kostin {

struct ComparisonReport {
    std::string scenario;
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;     ///< value <= tolerance (false for NaN)
    std::string label;     ///< scenario qualifier, e.g. "linearized-regime only"
    std::string metadata;  ///< grids, steps; ';'-separated
};

ComparisonReport make_report(const Scenario& s, std::string metric, double value, double tolerance,
                             std::string metadata = {});

/// Coefficient residuals, closed-form centre/width (free; harmonic with nu = 0),
/// and energy decay for harmonic nu > 0.
std::vector<ComparisonReport> trajectory_checks(const Scenario& s, const TrajectorySeries& series);

/// Analytic snapshot times: every snapshot_interval, plus t_final.
std::vector<std::size_t> snapshot_indices(const Scenario& s, const TrajectorySeries& series);

/// Norm of the analytic packet and continuity residual between the snapshot
/// state and its successor, over all snapshot indices.
std::vector<ComparisonReport> packet_checks(const Scenario& s, const TrajectorySeries& series);

/// Runs the PDE pipeline for the scenario from the analytic initial packet.
std::vector<ComplexGridField> run_pde(const Scenario& s, double dt_pde);

/// Max relative L2 distance between the analytic packet and the PDE snapshots.
ComparisonReport compare_ansatz_pde(const Scenario& s, const std::vector<ComplexGridField>& pde);
ComparisonReport compare_ansatz_pde(const Scenario& s);

/// Norm drift per 1000 steps, moments against (q, a), and centroid deceleration
/// for free damped motion.
std::vector<ComparisonReport> pde_checks(const Scenario& s, const std::vector<ComplexGridField>& pde);

/// |log2(d(2 dt) / d(dt)) - 2| for the ansatz-PDE distance at dt_pde.
/// `at_dt` reuses an existing distance at dt_pde.
ComparisonReport pde_order_check(const Scenario& s, double at_dt);

PropagatorKernel scenario_kernel(const Scenario& s);

ComparisonReport compare_kernel_reconstruction(const Scenario& s, const PropagatorKernel& k);
ComparisonReport compare_kernel_reconstruction(const Scenario& s);

/// Modulus flatness and a0 insensitivity of the free undamped kernel.
std::vector<ComparisonReport> kernel_checks(const Scenario& s, const PropagatorKernel& k);

/// Reconstruction distance at each causality time and the count of
/// non-decreasing consecutive pairs.
std::vector<ComparisonReport> causality_check(const Scenario& s);

/// nu = 0 only: packet along the scenario path vs an independently integrated
/// nu = 0 packet; with a kernel, free kernel vs closed-form propagator and the
/// coherent harmonic peak against the classical orbit.
std::vector<ComparisonReport> schrodinger_reduction_check(const Scenario& s,
                                                          const PropagatorKernel* k = nullptr);

/// Peak of |psi|^2 refined by a parabola through log density at the top three points.
double density_peak(const ComplexGridField& f);

void write_reports_csv(std::ostream& os, const std::vector<ComparisonReport>& reports);
void write_reports_text(std::ostream& os, const std::vector<ComparisonReport>& reports);

}  // namespace kostin
