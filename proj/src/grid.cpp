#include "kostin/grid.hpp"

#include <cmath>

#include "kostin/error.hpp"

namespace kostin {

SpatialGrid SpatialGrid::half_open(double lo, double hi, std::size_t n) {
    return {lo, (hi - lo) / static_cast<double>(n), n};
}

SpatialGrid SpatialGrid::closed(double lo, double hi, std::size_t n) {
    return {lo, (hi - lo) / static_cast<double>(n - 1), n};
}

void check_grid(const SpatialGrid& grid) {
    if (grid.n < 8) throw DomainError("grid needs at least 8 points");
    if (!(grid.dx > 0.0) || !std::isfinite(grid.dx)) throw DomainError("grid spacing must be positive");
    if (!std::isfinite(grid.x_min)) throw DomainError("grid origin must be finite");
}

bool same_grid(const SpatialGrid& a, const SpatialGrid& b) noexcept {
    const double scale = std::max(a.dx, b.dx);
    return a.n == b.n && std::abs(a.dx - b.dx) <= 1e-12 * scale &&
           std::abs(a.x_min - b.x_min) <= 1e-9 * scale;
}

double trapezoid(std::span<const double> f, double dx) {
    if (f.empty()) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
    return sum * dx;
}

cplx trapezoid(std::span<const cplx> f, double dx) {
    if (f.empty()) return {};
    cplx sum = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
    return sum * dx;
}

double l2_norm(const ComplexGridField& f) {
    std::vector<double> dens(f.values.size());
    for (std::size_t j = 0; j < dens.size(); ++j) dens[j] = std::norm(f.values[j]);
    return std::sqrt(trapezoid(dens, f.grid.dx));
}

double relative_l2_distance(const ComplexGridField& value, const ComplexGridField& reference) {
    if (!same_grid(value.grid, reference.grid) || value.values.size() != reference.values.size()) {
        throw GridMismatch("relative_l2_distance: fields live on different grids");
    }
    std::vector<double> diff(value.values.size());
    std::vector<double> ref(value.values.size());
    for (std::size_t j = 0; j < diff.size(); ++j) {
        diff[j] = std::norm(value.values[j] - reference.values[j]);
        ref[j] = std::norm(reference.values[j]);
    }
    const double num = trapezoid(diff, value.grid.dx);
    const double denom = trapezoid(ref, value.grid.dx);
    if (denom == 0.0) {
        // Two identically zero fields are at distance zero.
        if (num == 0.0) return 0.0;
        throw DomainError("relative_l2_distance: reference field is zero");
    }
    return std::sqrt(num / denom);
}

}  // namespace kostin
