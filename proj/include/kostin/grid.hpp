#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kostin {

using cplx = std::complex<double>;

/// Uniform 1-D grid x_j = x_min + j dx, j = 0..n-1.
struct SpatialGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 8;

    double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx; }
    double x_max() const noexcept { return x(n - 1); }
    /// Grid with n points covering [lo, hi) with spacing (hi - lo) / n.
    static SpatialGrid half_open(double lo, double hi, std::size_t n);
    /// Grid with n points covering [lo, hi] inclusive.
    static SpatialGrid closed(double lo, double hi, std::size_t n);
};

/// Throws DomainError unless n >= 8 and dx > 0.
void check_grid(const SpatialGrid& grid);
bool same_grid(const SpatialGrid& a, const SpatialGrid& b) noexcept;

struct ComplexGridField {
    SpatialGrid grid;
    std::vector<cplx> values;
    double time_tag = 0.0;
};

/// Trapezoidal integral of samples with spacing dx.
double trapezoid(std::span<const double> f, double dx);
cplx trapezoid(std::span<const cplx> f, double dx);

/// sqrt of the trapezoidal integral of |psi|^2.
double l2_norm(const ComplexGridField& f);

/// ||value - reference|| / ||reference|| with trapezoidal weights.
double relative_l2_distance(const ComplexGridField& value, const ComplexGridField& reference);

}  // namespace kostin
