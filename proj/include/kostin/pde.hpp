#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/model.hpp"
#include "kostin/packet.hpp"

namespace kostin {

enum class SplittingScheme { StrangSplitStep };

struct SolverConfig {
    SpatialGrid grid;
    double dt = 1e-3;
    SplittingScheme scheme = SplittingScheme::StrangSplitStep;
    /// Phase-extraction floor relative to the peak density.
    double mask_threshold = kDefaultMaskThreshold;
    /// Boundary density above this fraction of the peak is an error (periodic box).
    double edge_tolerance = 1e-8;
};

void check_solver_config(const SolverConfig& cfg);

/// Continuously tracked unwrapped phase of the last field. The Kostin term
/// hbar nu S depends on the absolute phase, so 2 pi jumps between steps must
/// be resolved against this reference. Empty means "take the raw phase".
struct PhaseGauge {
    std::vector<double> phase;
};

/// Strang split-step integrator for
///   i hbar psi_t = -hbar^2/(2m) psi_xx + [V + hbar nu S] psi,   S = arg psi (unwrapped),
/// on a periodic grid with spectral kinetic step.
class KostinSolver {
public:
    KostinSolver(const PhysicalSystem& sys, const PotentialModel& pot, const SolverConfig& cfg);
    ~KostinSolver();
    KostinSolver(const KostinSolver&) = delete;
    KostinSolver& operator=(const KostinSolver&) = delete;
    KostinSolver(KostinSolver&&) noexcept;
    KostinSolver& operator=(KostinSolver&&) noexcept;

    ComplexGridField step(const ComplexGridField& f, PhaseGauge& gauge);

    const SolverConfig& config() const noexcept { return cfg_; }

private:
    struct Fft;

    void potential_half_step(std::vector<cplx>& psi, std::vector<double>& S) const;
    std::vector<double> aligned_phase(const ComplexGridField& f, const std::vector<double>& ref,
                                      double t) const;
    void check_edges(const std::vector<cplx>& psi, double t) const;

    PhysicalSystem sys_;
    PotentialModel pot_;
    SolverConfig cfg_;
    std::vector<double> potential_;
    std::vector<cplx> kinetic_;
    std::unique_ptr<Fft> fft_;
};

/// One Strang step starting from the raw phase of `f`.
ComplexGridField kostin_step(const ComplexGridField& f, const PhysicalSystem& sys,
                             const PotentialModel& pot, const SolverConfig& cfg);

/// Repeated stepping to t_final (rounded to the nearest whole step).
/// Returns f0, every `snapshot_every`-th step, and the final step.
std::vector<ComplexGridField> kostin_evolve(const ComplexGridField& f0, const PhysicalSystem& sys,
                                            const PotentialModel& pot, const SolverConfig& cfg,
                                            double t_final, std::size_t snapshot_every,
                                            PhaseGauge gauge = {});

/// Centroid and second central moment of |psi|^2.
struct DensityMoments {
    double norm = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};
DensityMoments density_moments(const ComplexGridField& f);

}  // namespace kostin
