#include "kostin/model.hpp"

#include <cmath>
#include <string>

#include "kostin/error.hpp"

namespace kostin {

PhysicalSystem validate_system(const PhysicalSystem& sys) {
    if (!(sys.mass > 0.0) || !std::isfinite(sys.mass)) {
        throw DomainError("mass must be positive");
    }
    if (!(sys.hbar > 0.0) || !std::isfinite(sys.hbar)) {
        throw DomainError("hbar must be positive");
    }
    if (!(sys.nu >= 0.0) || !std::isfinite(sys.nu)) {
        throw DomainError("nu must be non-negative");
    }
    return sys;
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

PotentialModel::PotentialModel(Kind kind, std::size_t max_degree) : kind_(std::move(kind)) {
    if (const auto* h = std::get_if<potential::Harmonic>(&kind_)) {
        if (!(h->omega >= 0.0)) {
            throw DomainError("harmonic potential requires omega >= 0");
        }
    }
    if (const auto* p = std::get_if<potential::Polynomial>(&kind_)) {
        if (p->coefficients.empty()) {
            throw DomainError("polynomial potential needs at least one coefficient");
        }
        if (p->coefficients.size() > max_degree + 1) {
            throw DomainError("polynomial degree " + std::to_string(p->coefficients.size() - 1) +
                              " exceeds cap " + std::to_string(max_degree));
        }
        for (double c : p->coefficients) {
            if (!std::isfinite(c)) {
                throw DomainError("polynomial coefficients must be finite");
            }
        }
    }
}

bool PotentialModel::is_quadratic() const noexcept {
    if (const auto* p = std::get_if<potential::Polynomial>(&kind_)) {
        for (std::size_t i = 3; i < p->coefficients.size(); ++i) {
            if (p->coefficients[i] != 0.0) return false;
        }
    }
    return true;
}

PotentialSample potential_eval(const PotentialModel& pot, const PhysicalSystem& sys, double x,
                               double /*t*/) {
    return std::visit(
        Overloaded{
            [](const potential::Free&) { return PotentialSample{}; },
            [x](const potential::Linear& l) { return PotentialSample{-l.force * x, -l.force, 0.0}; },
            [&](const potential::Harmonic& h) {
                const double k = sys.mass * h.omega * h.omega;
                const double u = x - h.center;
                return PotentialSample{0.5 * k * u * u, k * u, k};
            },
            [x](const potential::Polynomial& p) {
                // Horner for the value and both derivatives at once.
                PotentialSample s;
                const auto& c = p.coefficients;
                for (std::size_t i = c.size(); i-- > 0;) {
                    s.second = s.second * x + 2.0 * s.first;
                    s.first = s.first * x + s.value;
                    s.value = s.value * x + c[i];
                }
                return s;
            },
        },
        pot.kind());
}

}  // namespace kostin
