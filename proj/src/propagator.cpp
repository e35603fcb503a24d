#include "kostin/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "kostin/csv.hpp"
#include "kostin/error.hpp"
#include "kostin/packet.hpp"

namespace kostin {

namespace {

constexpr double kPi = std::numbers::pi;
// Integrand terms below exp(-50) of their own prefactor are skipped.
constexpr double kNegligibleExponent = -50.0;

std::size_t next_odd(double n) {
    auto k = static_cast<std::size_t>(std::ceil(n));
    return k % 2 == 1 ? k : k + 1;
}

void check_family(const FamilyParams& fam) {
    if (!(fam.a0 > 0.0)) throw DomainError("family width a0 must be positive");
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// Phi(v0, x, t) of a member whose trajectory endpoint is `s`, times exp(-i m v0 x0 / hbar).
struct MemberEvaluator {
    double amp;         // sqrt(a0 / a)
    double inv4a2;      // 1 / (4 a^2)
    double q;
    double k_qdot;      // m qdot / hbar
    double half_k_rate; // m adot / (2 hbar a)
    double base_phase;  // S0 - m v0 x0 / hbar

    MemberEvaluator(const TrajectoryState& s, double a0, const PhysicalSystem& sys, double conj_phase)
        : amp(std::sqrt(a0 / s.a)),
          inv4a2(1.0 / (4.0 * s.a * s.a)),
          q(s.q),
          k_qdot(sys.mass * s.qdot / sys.hbar),
          half_k_rate(0.5 * sys.mass * s.adot / (sys.hbar * s.a)),
          base_phase(s.S0 - conj_phase) {}

    /// |x - q| beyond which the Gaussian factor is below exp(kNegligibleExponent).
    double support_radius() const { return std::sqrt(-kNegligibleExponent / inv4a2); }

    double exponent(double x) const {
        const double u = x - q;
        return -u * u * inv4a2;
    }
    cplx value(double x, double re) const {
        const double u = x - q;
        return std::polar(amp * std::exp(re), base_phase + k_qdot * u + half_k_rate * u * u);
    }
};

TrajectoryState member_state(const InitialConditions& ic, const PhysicalSystem& sys,
                             const PotentialModel& pot, double t, double dt,
                             TrajectoryCache& cache) {
    if (t == 0.0) return initial_state(ic, sys);
    return cache.get(ic, sys, pot, t, std::min(dt, t));
}

std::size_t grid_index_near(const SpatialGrid& g, double x) {
    const double r = std::round((x - g.x_min) / g.dx);
    if (!(r > 0.0)) return 0;
    if (r >= static_cast<double>(g.n - 1)) return g.n - 1;
    return static_cast<std::size_t>(r);
}

// Half-open index range of grid points within `radius` of `center` (widened by one cell).
std::pair<std::size_t, std::size_t> support_range(const SpatialGrid& g, double center, double radius) {
    const double lo = std::floor((center - radius - g.x_min) / g.dx) - 1.0;
    const double hi = std::ceil((center + radius - g.x_min) / g.dx) + 2.0;
    const double n = static_cast<double>(g.n);
    const auto clamp = [n](double v) { return static_cast<std::size_t>(std::clamp(v, 0.0, n)); };
    return {clamp(lo), clamp(hi)};
}

struct Accumulated {
    std::vector<cplx> values;
    double end_ratio = 0.0;
};

Accumulated accumulate(const FamilyParams& fam, const PhysicalSystem& sys,
                       const PotentialModel& pot, double t, double dt, const QuadratureSpec& quad,
                       const SpatialGrid& x_grid, const SpatialGrid& x0_grid,
                       FamilyCentering centering, TrajectoryCache& cache) {
    const QuadratureNodes nodes = quadrature_nodes(quad);
    const std::size_t nx = x_grid.n;
    const std::size_t n0 = x0_grid.n;
    const std::size_t nv = nodes.nodes.size();
    Accumulated acc;
    acc.values.assign(nx * n0, cplx{});
    double max_mod = 0.0;
    double end_mod = 0.0;
    const double k = sys.mass / sys.hbar;

    for (std::size_t j = 0; j < n0; ++j) {
        const double x0 = x0_grid.x(j);
        const double c = centering == FamilyCentering::SourcePoint ? x0 : fam.center;
        for (std::size_t n = 0; n < nv; ++n) {
            const double v = nodes.nodes[n];
            const double w = nodes.weights[n];
            const TrajectoryState s = member_state({c, v, fam.a0, fam.b0}, sys, pot, t, dt, cache);
            const MemberEvaluator member(s, fam.a0, sys, k * v * x0);
            const bool end_node = (n == 0 || n + 1 == nv);
            // Peak modulus on the grid, at the point nearest to q.
            const std::size_t nearest = grid_index_near(x_grid, member.q);
            const double peak = member.amp * std::exp(member.exponent(x_grid.x(nearest)));
            max_mod = std::max(max_mod, peak);
            if (end_node) end_mod = std::max(end_mod, peak);
            const auto [lo, hi] = support_range(x_grid, member.q, member.support_radius());
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = x_grid.x(i);
                const double re = member.exponent(x);
                if (re < kNegligibleExponent) continue;
                acc.values[i * n0 + j] += w * member.value(x, re);
            }
        }
    }
    const double pref = sys.mass / (2.0 * kPi * sys.hbar);
    for (auto& z : acc.values) z *= pref;
    acc.end_ratio = max_mod > 0.0 ? end_mod / max_mod : 0.0;
    return acc;
}

QuadratureSpec widened(const QuadratureSpec& q) {
    QuadratureSpec out = q;
    out.v_halfwidth = 1.5 * q.v_halfwidth;
    out.n_nodes = next_odd(1.5 * static_cast<double>(q.n_nodes - 1) + 1.0);
    return out;
}

}  // namespace

void check_quadrature(const QuadratureSpec& quad) {
    if (!(quad.v_halfwidth > 0.0)) throw DomainError("quadrature halfwidth must be positive");
    if (quad.n_nodes < kMinQuadratureNodes) throw DomainError("quadrature needs at least 33 nodes");
    if (quad.n_nodes % 2 == 0) throw DomainError("quadrature node count must be odd");
}

QuadratureNodes quadrature_nodes(const QuadratureSpec& quad) {
    check_quadrature(quad);
    QuadratureNodes out;
    const std::size_t n = quad.n_nodes;
    const double lo = quad.v_center - quad.v_halfwidth;
    if (quad.rule == QuadratureRule::Trapezoid) {
        const double h = 2.0 * quad.v_halfwidth / static_cast<double>(n - 1);
        out.nodes.resize(n);
        out.weights.assign(n, h);
        for (std::size_t i = 0; i < n; ++i) out.nodes[i] = lo + static_cast<double>(i) * h;
        out.weights.front() = out.weights.back() = 0.5 * h;
    } else {
        gauss_legendre(n, out.nodes, out.weights);
        for (std::size_t i = 0; i < n; ++i) {
            out.nodes[i] = quad.v_center + quad.v_halfwidth * out.nodes[i];
            out.weights[i] *= quad.v_halfwidth;
        }
    }
    return out;
}

std::size_t TrajectoryCache::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (double d : {k.center, k.v0, k.a0, k.b0, k.t, k.dt}) {
        h ^= std::bit_cast<std::uint64_t>(d);
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return h;
}

TrajectoryState TrajectoryCache::get(const InitialConditions& ic, const PhysicalSystem& sys,
                                     const PotentialModel& pot, double t, double dt) {
    const Key key{ic.x0, ic.v0, ic.a0, ic.b0, t, dt};
    if (auto it = map_.find(key); it != map_.end()) return it->second;
    ++misses_;
    const TrajectoryState s = advance(ic, sys, pot, t, dt);
    map_.emplace(key, s);
    return s;
}

ComplexGridField phi_family(double v0, const FamilyParams& fam, const PhysicalSystem& sys,
                            const PotentialModel& pot, double t, double dt,
                            const SpatialGrid& grid) {
    check_family(fam);
    if (!(t >= 0.0)) throw DomainError("phi_family: t must be non-negative");
    const InitialConditions ic{fam.center, v0, fam.a0, fam.b0};
    const TrajectoryState s = t == 0.0 ? initial_state(ic, sys) : advance(ic, sys, pot, t, std::min(dt, t));
    ComplexGridField f = packet_psi(s, sys, grid);
    const double scale = std::sqrt(std::sqrt(2.0 * kPi * fam.a0 * fam.a0));
    for (auto& z : f.values) z *= scale;
    return f;
}

PropagatorKernel kernel_eval(const FamilyParams& fam, const PhysicalSystem& sys,
                             const PotentialModel& pot, double t, double dt,
                             const QuadratureSpec& quad, const SpatialGrid& x_grid,
                             const SpatialGrid& x0_grid, const KernelOptions& options,
                             TrajectoryCache* cache) {
    validate_system(sys);
    check_family(fam);
    check_grid(x_grid);
    check_grid(x0_grid);
    check_quadrature(quad);
    if (!(t > 0.0)) throw DomainError("kernel at t = 0 is a delta distribution; use t > 0");
    if (!(dt > 0.0)) throw DomainError("trajectory dt must be positive");

    TrajectoryCache local;
    TrajectoryCache& memo = cache ? *cache : local;

    PropagatorKernel kernel;
    kernel.x_grid = x_grid;
    kernel.x0_grid = x0_grid;
    kernel.t = t;
    kernel.family = fam;
    kernel.centering = options.centering;

    QuadratureSpec q = quad;
    for (std::size_t round = 0;; ++round) {
        Accumulated acc = accumulate(fam, sys, pot, t, dt, q, x_grid, x0_grid, options.centering, memo);
        const bool converged = acc.end_ratio <= options.end_tolerance;
        if (converged || !options.auto_widen || round >= options.max_widenings) {
            kernel.values = std::move(acc.values);
            kernel.end_node_ratio = acc.end_ratio;
            kernel.quadrature = q;
            if (!converged) {
                std::ostringstream msg;
                msg << "v0 quadrature truncated: end-node integrand is " << acc.end_ratio
                    << " of its maximum (halfwidth " << q.v_halfwidth << ")";
                kernel.warnings.push_back(msg.str());
            }
            return kernel;
        }
        std::ostringstream msg;
        msg << "v0 window widened from halfwidth " << q.v_halfwidth << " (end-node ratio "
            << acc.end_ratio << ")";
        kernel.warnings.push_back(msg.str());
        q = widened(q);
    }
}

ComplexGridField propagate(const PropagatorKernel& kernel, const ComplexGridField& psi0) {
    if (!same_grid(psi0.grid, kernel.x0_grid) || psi0.values.size() != kernel.x0_grid.n) {
        throw GridMismatch("propagate: initial field is not sampled on the kernel's x0 grid");
    }
    const std::size_t nx = kernel.x_grid.n;
    const std::size_t n0 = kernel.x0_grid.n;
    std::vector<cplx> weighted(n0);
    for (std::size_t j = 0; j < n0; ++j) {
        const double w = (j == 0 || j + 1 == n0) ? 0.5 : 1.0;
        weighted[j] = w * kernel.x0_grid.dx * psi0.values[j];
    }
    ComplexGridField out{kernel.x_grid, std::vector<cplx>(nx), psi0.time_tag + kernel.t};
    for (std::size_t i = 0; i < nx; ++i) {
        cplx sum{};
        const cplx* row = kernel.values.data() + i * n0;
        for (std::size_t j = 0; j < n0; ++j) sum += row[j] * weighted[j];
        out.values[i] = sum;
    }
    return out;
}

cplx free_propagator(const PhysicalSystem& sys, double x, double x0, double t) {
    const cplx pref = std::sqrt(cplx(sys.mass / (2.0 * kPi * sys.hbar * t), 0.0) / cplx(0.0, 1.0));
    const double u = x - x0;
    return pref * std::polar(1.0, sys.mass * u * u / (2.0 * sys.hbar * t));
}

cplx completeness_probe(const FamilyParams& fam, const PhysicalSystem& sys,
                        const PotentialModel& pot, double t, double dt,
                        const QuadratureSpec& quad, const std::function<double(double)>& test_fn,
                        double x, const SpatialGrid& xprime_grid, FamilyCentering centering) {
    validate_system(sys);
    check_family(fam);
    check_grid(xprime_grid);
    if (!(t >= 0.0)) throw DomainError("completeness_probe: t must be non-negative");
    const QuadratureNodes nodes = quadrature_nodes(quad);
    const std::size_t np = xprime_grid.n;
    std::vector<double> f(np);
    for (std::size_t j = 0; j < np; ++j) f[j] = test_fn(xprime_grid.x(j));

    TrajectoryCache cache;
    const double c = centering == FamilyCentering::SourcePoint ? x : fam.center;
    cplx total{};
    for (std::size_t n = 0; n < nodes.nodes.size(); ++n) {
        const double v = nodes.nodes[n];
        const TrajectoryState s = member_state({c, v, fam.a0, fam.b0}, sys, pot, t, dt, cache);
        const MemberEvaluator member(s, fam.a0, sys, 0.0);
        cplx inner{};
        for (std::size_t j = 0; j < np; ++j) {
            if (f[j] == 0.0) continue;
            const double xp = xprime_grid.x(j);
            const double re = member.exponent(xp);
            if (re < kNegligibleExponent) continue;
            const double w = (j == 0 || j + 1 == np) ? 0.5 : 1.0;
            inner += w * std::conj(member.value(xp, re)) * f[j];
        }
        inner *= xprime_grid.dx;
        const double re_x = member.exponent(x);
        if (re_x < kNegligibleExponent) continue;
        total += nodes.weights[n] * member.value(x, re_x) * inner;
    }
    return total * (sys.mass / (2.0 * kPi * sys.hbar));
}

double reconstruction_distance(const PropagatorKernel& kernel, const PhysicalSystem& sys,
                               const PotentialModel& pot, double v0_star, double dt,
                               cplx amplitude) {
    const InitialConditions ic{kernel.family.center, v0_star, kernel.family.a0, kernel.family.b0};
    ComplexGridField psi0 = packet_psi(initial_state(ic, sys), sys, kernel.x0_grid);
    for (auto& z : psi0.values) z *= amplitude;
    const ComplexGridField out = propagate(kernel, psi0);
    ComplexGridField ref =
        packet_psi(advance(ic, sys, pot, kernel.t, std::min(dt, kernel.t)), sys, kernel.x_grid);
    for (auto& z : ref.values) z *= amplitude;
    return relative_l2_distance(out, ref);
}

double causality_probe(const FamilyParams& fam, const PhysicalSystem& sys,
                       const PotentialModel& pot, const QuadratureSpec& quad, double v0_star,
                       double t_small, double dt, const SpatialGrid& x_grid,
                       const SpatialGrid& x0_grid, cplx amplitude, const KernelOptions& options) {
    if (!(t_small > 0.0) || t_small > 0.05) {
        throw DomainError("causality_probe: t_small must lie in (0, 0.05]");
    }
    const PropagatorKernel kernel =
        kernel_eval(fam, sys, pot, t_small, dt, quad, x_grid, x0_grid, options);
    return reconstruction_distance(kernel, sys, pot, v0_star, dt, amplitude);
}

void write_kernel_csv(std::ostream& os, const PropagatorKernel& kernel) {
    os << "x,x0,re_K,im_K\n";
    for (std::size_t i = 0; i < kernel.x_grid.n; ++i) {
        for (std::size_t j = 0; j < kernel.x0_grid.n; ++j) {
            const cplx k = kernel(i, j);
            write_csv_row(os, {kernel.x_grid.x(i), kernel.x0_grid.x(j), k.real(), k.imag()});
        }
    }
}

}  // namespace kostin
