#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace kostin {

/// Mass, reduced Planck constant and friction coefficient of the Kostin equation.
struct PhysicalSystem {
    double mass = 1.0;
    double hbar = 1.0;
    double nu = 0.0;
};

/// Returns `sys` unchanged, or throws DomainError naming the violated invariant.
PhysicalSystem validate_system(const PhysicalSystem& sys);

namespace potential {

struct Free {};

/// Constant force F, V(x) = -F x.
struct Linear {
    double force = 0.0;
};

/// V(x) = m omega^2 (x - center)^2 / 2.
struct Harmonic {
    double omega = 1.0;
    double center = 0.0;
};

/// V(x) = sum_i coefficients[i] x^i.
struct Polynomial {
    std::vector<double> coefficients;
};

}  // namespace potential

inline constexpr std::size_t kMaxPolynomialDegree = 6;

class PotentialModel {
public:
    using Kind = std::variant<potential::Free, potential::Linear, potential::Harmonic,
                              potential::Polynomial>;

    PotentialModel() = default;
    PotentialModel(Kind kind, std::size_t max_degree = kMaxPolynomialDegree);

    const Kind& kind() const noexcept { return kind_; }
    bool is_free() const noexcept { return std::holds_alternative<potential::Free>(kind_); }
    /// True when V is at most quadratic in x, i.e. the Gaussian closure is exact.
    bool is_quadratic() const noexcept;

private:
    Kind kind_ = potential::Free{};
};

struct PotentialSample {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

/// Analytic V, dV/dx and d2V/dx2 at (x, t). The mass enters only the harmonic family.
PotentialSample potential_eval(const PotentialModel& pot, const PhysicalSystem& sys, double x,
                               double t);

}  // namespace kostin
