#include "kostin/packet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "kostin/csv.hpp"
#include "kostin/error.hpp"

namespace kostin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_width(const TrajectoryState& s) {
    if (!(s.a > 0.0)) throw DomainError("packet width a must be positive");
}

}  // namespace

double packet_density(const TrajectoryState& s, double x) {
    check_width(s);
    const double u = x - s.q;
    return std::exp(-u * u / (2.0 * s.a * s.a)) / std::sqrt(kTwoPi * s.a * s.a);
}

double packet_amplitude(const TrajectoryState& s, double x) {
    check_width(s);
    const double u = x - s.q;
    return std::exp(-u * u / (4.0 * s.a * s.a)) / std::sqrt(std::sqrt(kTwoPi * s.a * s.a));
}

double packet_phase(const TrajectoryState& s, const PhysicalSystem& sys, double x) {
    check_width(s);
    const double u = x - s.q;
    const double k = sys.mass / sys.hbar;
    return s.S0 + k * s.qdot * u + 0.5 * k * (s.adot / s.a) * u * u;
}

ComplexGridField packet_psi(const TrajectoryState& s, const PhysicalSystem& sys,
                            const SpatialGrid& grid) {
    check_width(s);
    check_grid(grid);
    ComplexGridField f{grid, std::vector<cplx>(grid.n), s.t};
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        f.values[j] = std::polar(packet_amplitude(s, x), packet_phase(s, sys, x));
    }
    return f;
}

double quantum_velocity(const TrajectoryState& s, double x) {
    check_width(s);
    return (s.adot / s.a) * (x - s.q) + s.qdot;
}

double quantum_potential_gaussian(const TrajectoryState& s, const PhysicalSystem& sys, double x) {
    check_width(s);
    const double u = x - s.q;
    const double a2 = s.a * s.a;
    const double h2m = sys.hbar * sys.hbar / sys.mass;
    return h2m / (4.0 * a2) - h2m * u * u / (8.0 * a2 * a2);
}

std::vector<double> quantum_potential_field(std::span<const double> phi, const SpatialGrid& grid,
                                            const PhysicalSystem& sys) {
    const std::size_t n = phi.size();
    if (n < 3) throw DomainError("quantum_potential_field needs at least 3 samples");
    std::vector<double> out(n);
    const double scale = -sys.hbar * sys.hbar / (2.0 * sys.mass * grid.dx * grid.dx);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (!(phi[j] > 0.0)) {
            throw DomainError("quantum_potential_field: amplitude not positive at interior index " +
                              std::to_string(j));
        }
        out[j] = scale * (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / phi[j];
    }
    out.front() = out[1];
    out.back() = out[n - 2];
    return out;
}

HydroFields madelung_decompose(const ComplexGridField& f, const PhysicalSystem& sys,
                               double mask_threshold) {
    const std::size_t n = f.values.size();
    HydroFields h;
    h.grid = f.grid;
    h.rho.resize(n);
    h.S.assign(n, 0.0);
    h.v.assign(n, 0.0);
    h.mask.assign(n, false);
    if (n == 0) return h;

    for (std::size_t j = 0; j < n; ++j) h.rho[j] = std::norm(f.values[j]);
    h.peak = static_cast<std::size_t>(std::max_element(h.rho.begin(), h.rho.end()) - h.rho.begin());
    const double floor = mask_threshold * h.rho[h.peak];
    for (std::size_t j = 0; j < n; ++j) {
        h.mask[j] = h.rho[j] >= floor && std::abs(f.values[j]) > 1e-300;
    }

    // A zero field has no phase; everything stays masked at S = 0.
    if (!h.mask[h.peak]) {
        h.connected = true;
        return h;
    }

    const auto raw = [&](std::size_t j) { return std::arg(f.values[j]); };
    h.S[h.peak] = raw(h.peak);

    // Walk outward from the peak; masked points carry the last unmasked phase.
    auto walk = [&](auto next, auto done) {
        std::size_t last = h.peak;
        bool gap = false;
        for (std::size_t j = next(h.peak); !done(j); j = next(j)) {
            if (h.mask[j]) {
                if (gap) h.connected = false;
                const double d = std::remainder(raw(j) - raw(last), kTwoPi);
                h.S[j] = h.S[last] + d;
                last = j;
            } else {
                h.S[j] = h.S[last];
                gap = true;
            }
        }
    };
    walk([](std::size_t j) { return j + 1; }, [n](std::size_t j) { return j >= n; });
    walk([](std::size_t j) { return j - 1; },
         [](std::size_t j) { return j == static_cast<std::size_t>(-1); });

    const double k = sys.hbar / sys.mass;
    const double dx = f.grid.dx;
    if (n >= 2) {
        h.v.front() = k * (h.S[1] - h.S[0]) / dx;
        h.v.back() = k * (h.S[n - 1] - h.S[n - 2]) / dx;
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        h.v[j] = k * (h.S[j + 1] - h.S[j - 1]) / (2.0 * dx);
    }
    return h;
}

ComplexGridField madelung_recompose(const HydroFields& h, double time_tag) {
    ComplexGridField f{h.grid, std::vector<cplx>(h.rho.size()), time_tag};
    for (std::size_t j = 0; j < h.rho.size(); ++j) {
        f.values[j] = std::polar(std::sqrt(h.rho[j]), h.S[j]);
    }
    return f;
}

double continuity_residual(const ComplexGridField& f_prev, const ComplexGridField& f_next,
                           const PhysicalSystem& sys, double mask_threshold) {
    if (!same_grid(f_prev.grid, f_next.grid) || f_prev.values.size() != f_next.values.size()) {
        throw GridMismatch("continuity_residual: snapshots live on different grids");
    }
    const double dt = f_next.time_tag - f_prev.time_tag;
    if (dt == 0.0) throw GridMismatch("continuity_residual: snapshots share the same time tag");

    const std::size_t n = f_prev.values.size();
    ComplexGridField mid{f_prev.grid, std::vector<cplx>(n), 0.5 * (f_prev.time_tag + f_next.time_tag)};
    for (std::size_t j = 0; j < n; ++j) mid.values[j] = 0.5 * (f_prev.values[j] + f_next.values[j]);
    const HydroFields h = madelung_decompose(mid, sys, mask_threshold);

    std::vector<double> flux(n);
    for (std::size_t j = 0; j < n; ++j) flux[j] = h.rho[j] * h.v[j];

    double worst = 0.0;
    const double dx = f_prev.grid.dx;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (!(h.mask[j - 1] && h.mask[j] && h.mask[j + 1])) continue;
        const double drho_dt = (std::norm(f_next.values[j]) - std::norm(f_prev.values[j])) / dt;
        const double dflux_dx = (flux[j + 1] - flux[j - 1]) / (2.0 * dx);
        worst = std::max(worst, std::abs(drho_dt + dflux_dx));
    }
    return worst;
}

void write_snapshot_csv(std::ostream& os, const ComplexGridField& f, const PhysicalSystem& sys) {
    const HydroFields h = madelung_decompose(f, sys);
    const std::size_t n = f.values.size();
    // Quantum potential only where the amplitude is resolved; zero in masked tails.
    std::vector<double> vqu(n, 0.0);
    const double scale = -sys.hbar * sys.hbar / (2.0 * sys.mass * f.grid.dx * f.grid.dx);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (!(h.mask[j - 1] && h.mask[j] && h.mask[j + 1])) continue;
        const double pm = std::sqrt(h.rho[j - 1]);
        const double p0 = std::sqrt(h.rho[j]);
        const double pp = std::sqrt(h.rho[j + 1]);
        vqu[j] = scale * (pp - 2.0 * p0 + pm) / p0;
    }
    os << "x,re_psi,im_psi,rho,S,v,V_qu\n";
    for (std::size_t j = 0; j < n; ++j) {
        write_csv_row(os, {f.grid.x(j), f.values[j].real(), f.values[j].imag(), h.rho[j], h.S[j],
                           h.v[j], vqu[j]});
    }
}

}  // namespace kostin
