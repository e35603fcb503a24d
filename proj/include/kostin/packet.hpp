#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/model.hpp"
#include "kostin/trajectory.hpp"

namespace kostin {

// Analytic Gaussian packet along a trajectory state.

/// rho = (2 pi a^2)^(-1/2) exp(-(x-q)^2 / (2 a^2)).
double packet_density(const TrajectoryState& s, double x);
/// phi = sqrt(rho).
double packet_amplitude(const TrajectoryState& s, double x);
/// S = S0 + (m qdot/hbar)(x-q) + (m/(2 hbar)) (adot/a) (x-q)^2.
double packet_phase(const TrajectoryState& s, const PhysicalSystem& sys, double x);
/// psi = phi exp(iS) sampled on the grid, tagged with s.t.
ComplexGridField packet_psi(const TrajectoryState& s, const PhysicalSystem& sys,
                            const SpatialGrid& grid);
/// v = (adot/a)(x-q) + qdot.
double quantum_velocity(const TrajectoryState& s, double x);
/// V_qu = hbar^2/(4 m a^2) - hbar^2 (x-q)^2 / (8 m a^4).
double quantum_potential_gaussian(const TrajectoryState& s, const PhysicalSystem& sys, double x);

// Hydrodynamic (Madelung) view of arbitrary sampled fields.

inline constexpr double kDefaultMaskThreshold = 1e-12;

struct HydroFields {
    SpatialGrid grid;
    std::vector<double> rho;
    std::vector<double> S;
    std::vector<double> v;
    /// True where rho >= threshold * peak; phase is meaningful only there.
    std::vector<bool> mask;
    std::size_t peak = 0;
    /// The unmasked points form one interval.
    bool connected = true;
};

/// V_qu = -(hbar^2 / 2m) phi''/phi with second-order central differences.
/// Endpoints copy their neighbour. Throws DomainError if phi <= 0 at an interior point.
std::vector<double> quantum_potential_field(std::span<const double> phi, const SpatialGrid& grid,
                                            const PhysicalSystem& sys);

/// rho = |psi|^2, S = phase unwrapped outward from the density peak, v = (hbar/m) dS/dx.
HydroFields madelung_decompose(const ComplexGridField& f, const PhysicalSystem& sys,
                               double mask_threshold = kDefaultMaskThreshold);

/// sqrt(rho) exp(iS).
ComplexGridField madelung_recompose(const HydroFields& h, double time_tag);

/// max over interior unmasked points of |d rho/dt + d(rho v)/dx| between two snapshots.
double continuity_residual(const ComplexGridField& f_prev, const ComplexGridField& f_next,
                           const PhysicalSystem& sys,
                           double mask_threshold = kDefaultMaskThreshold);

/// CSV with header "x,re_psi,im_psi,rho,S,v,V_qu".
void write_snapshot_csv(std::ostream& os, const ComplexGridField& f, const PhysicalSystem& sys);

}  // namespace kostin
