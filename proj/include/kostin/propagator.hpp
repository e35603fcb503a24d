#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "kostin/grid.hpp"
#include "kostin/model.hpp"
#include "kostin/trajectory.hpp"

namespace kostin {

/// Shared initial data of the packet family indexed by the initial velocity v0.
struct FamilyParams {
    double center = 0.0;  ///< X0, initial centre of every member
    double a0 = 1.0;
    double b0 = 0.0;
};

enum class QuadratureRule { Trapezoid, GaussLegendre };

/// Truncated v0 integral over [v_center - v_halfwidth, v_center + v_halfwidth].
struct QuadratureSpec {
    double v_center = 0.0;
    double v_halfwidth = 10.0;
    std::size_t n_nodes = 201;
    QuadratureRule rule = QuadratureRule::Trapezoid;
};

inline constexpr std::size_t kMinQuadratureNodes = 33;

void check_quadrature(const QuadratureSpec& quad);

struct QuadratureNodes {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureNodes quadrature_nodes(const QuadratureSpec& quad);

/// Which centre the family member attached to a kernel column starts from.
///
/// SourcePoint starts every member of column x0 at q(0) = x0. The plane-wave
/// conjugate exp(-i m v0 x0 / hbar) is then the exact value of Phi* at t = 0
/// and the kernel does not depend on a0 or b0 for linear dynamics.
/// Shared starts every member at FamilyParams::center; the kernel then carries
/// an extra Gaussian envelope in x0 around that centre.
enum class FamilyCentering { SourcePoint, Shared };

struct KernelOptions {
    FamilyCentering centering = FamilyCentering::SourcePoint;
    /// Widen the v0 window (keeping the node spacing) while end nodes are significant.
    bool auto_widen = true;
    /// End-node integrand modulus, relative to the maximum, that triggers a warning.
    double end_tolerance = 1e-10;
    std::size_t max_widenings = 8;
};

/// Memoised trajectory endpoints keyed on (centre, v0, a0, b0, t, dt) for one
/// fixed system and potential.
class TrajectoryCache {
public:
    TrajectoryState get(const InitialConditions& ic, const PhysicalSystem& sys,
                        const PotentialModel& pot, double t, double dt);
    std::size_t size() const noexcept { return map_.size(); }
    std::size_t misses() const noexcept { return misses_; }

private:
    struct Key {
        double center, v0, a0, b0, t, dt;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };
    std::unordered_map<Key, TrajectoryState, KeyHash> map_;
    std::size_t misses_ = 0;
};

struct PropagatorKernel {
    SpatialGrid x_grid;
    SpatialGrid x0_grid;
    double t = 0.0;
    /// Row-major n_x by n_x0 matrix, K(x_i, x0_j) at index i * n_x0 + j.
    std::vector<cplx> values;
    QuadratureSpec quadrature;  ///< as actually used (after any widening)
    FamilyParams family;
    FamilyCentering centering = FamilyCentering::SourcePoint;
    /// Largest end-node integrand modulus relative to the largest integrand modulus.
    double end_node_ratio = 0.0;
    std::vector<std::string> warnings;

    cplx operator()(std::size_t i, std::size_t j) const { return values[i * x0_grid.n + j]; }
};

/// Phi(v0, x, t) = (2 pi a0^2)^(1/4) psi(v0, x, t) for the member started at
/// (fam.center, v0, fam.a0, fam.b0). t = 0 is allowed.
ComplexGridField phi_family(double v0, const FamilyParams& fam, const PhysicalSystem& sys,
                            const PotentialModel& pot, double t, double dt,
                            const SpatialGrid& grid);

/// K(x, x0; t) = m/(2 pi hbar) sum_k w_k Phi(v_k, x, t) exp(-i m v_k x0 / hbar).
PropagatorKernel kernel_eval(const FamilyParams& fam, const PhysicalSystem& sys,
                             const PotentialModel& pot, double t, double dt,
                             const QuadratureSpec& quad, const SpatialGrid& x_grid,
                             const SpatialGrid& x0_grid, const KernelOptions& options = {},
                             TrajectoryCache* cache = nullptr);

/// psi(x, t) = trapezoidal integral over x0 of K(x, x0; t) psi0(x0).
ComplexGridField propagate(const PropagatorKernel& kernel, const ComplexGridField& psi0);

/// Closed-form free-particle propagator sqrt(m/(2 pi i hbar t)) exp(i m (x-x0)^2 / (2 hbar t)).
cplx free_propagator(const PhysicalSystem& sys, double x, double x0, double t);

/// Nested-quadrature value of
///   integral dx' [m/(2 pi hbar) sum_k w_k Phi(v_k, x, t) Phi*(v_k, x', t)] f(x')
/// with x' on `xprime_grid`. The family starts at fam.center (Shared) or at x (SourcePoint).
cplx completeness_probe(const FamilyParams& fam, const PhysicalSystem& sys,
                        const PotentialModel& pot, double t, double dt,
                        const QuadratureSpec& quad, const std::function<double(double)>& test_fn,
                        double x, const SpatialGrid& xprime_grid,
                        FamilyCentering centering = FamilyCentering::Shared);

/// psi0 = amplitude * psi(v0_star, ., 0) of the family; propagate it through the
/// kernel and return the relative L2 distance to amplitude * psi(v0_star, ., t).
double reconstruction_distance(const PropagatorKernel& kernel, const PhysicalSystem& sys,
                               const PotentialModel& pot, double v0_star, double dt,
                               cplx amplitude = 1.0);

/// Reconstruction distance at a small time 0 < t_small <= 0.05.
double causality_probe(const FamilyParams& fam, const PhysicalSystem& sys,
                       const PotentialModel& pot, const QuadratureSpec& quad, double v0_star,
                       double t_small, double dt, const SpatialGrid& x_grid,
                       const SpatialGrid& x0_grid, cplx amplitude = 1.0,
                       const KernelOptions& options = {});

/// CSV with header "x,x0,re_K,im_K".
void write_kernel_csv(std::ostream& os, const PropagatorKernel& kernel);

}  // namespace kostin
