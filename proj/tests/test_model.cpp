#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "kostin/error.hpp"
#include "kostin/model.hpp"

using namespace kostin;

TEST_CASE("free potential is zero everywhere") {
    const auto s = potential_eval(PotentialModel{}, PhysicalSystem{}, 3.7, 0.0);
    CHECK(s.value == 0.0);
    CHECK(s.first == 0.0);
    CHECK(s.second == 0.0);
}

TEST_CASE("harmonic potential") {
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const auto s = potential_eval(pot, PhysicalSystem{}, 2.0, 0.0);
    CHECK(s.value == doctest::Approx(2.0));
    CHECK(s.first == doctest::Approx(2.0));
    CHECK(s.second == doctest::Approx(1.0));

    SUBCASE("mass and centre enter") {
        const PotentialModel shifted(potential::Harmonic{2.0, 1.0});
        const auto r = potential_eval(shifted, PhysicalSystem{3.0, 1.0, 0.0}, 2.0, 0.0);
        CHECK(r.value == doctest::Approx(0.5 * 3.0 * 4.0 * 1.0));
        CHECK(r.first == doctest::Approx(3.0 * 4.0 * 1.0));
        CHECK(r.second == doctest::Approx(12.0));
    }
}

TEST_CASE("cubic polynomial") {
    const PotentialModel pot(potential::Polynomial{{0.0, 0.0, 0.0, 1.0}});
    const auto s = potential_eval(pot, PhysicalSystem{}, 2.0, 0.0);
    CHECK(s.value == doctest::Approx(8.0));
    CHECK(s.first == doctest::Approx(12.0));
    CHECK(s.second == doctest::Approx(12.0));
}

TEST_CASE("linear potential") {
    const PotentialModel pot(potential::Linear{0.5});
    const auto s = potential_eval(pot, PhysicalSystem{}, 4.0, 0.0);
    CHECK(s.value == doctest::Approx(-2.0));
    CHECK(s.first == doctest::Approx(-0.5));
    CHECK(s.second == 0.0);
}

TEST_CASE("potential invariants") {
    CHECK_THROWS_AS(PotentialModel(potential::Harmonic{-1.0, 0.0}), DomainError);
    CHECK_NOTHROW(PotentialModel(potential::Harmonic{0.0, 0.0}));
    CHECK_THROWS_AS(PotentialModel(potential::Polynomial{{}}), DomainError);
    CHECK_THROWS_AS(PotentialModel(potential::Polynomial{std::vector<double>(8, 1.0)}), DomainError);
    CHECK_NOTHROW(PotentialModel(potential::Polynomial{std::vector<double>(7, 1.0)}));
    CHECK_NOTHROW(PotentialModel(potential::Polynomial{std::vector<double>(8, 1.0)}, 7));
    CHECK(PotentialModel(potential::Harmonic{}).is_quadratic());
    CHECK_FALSE(PotentialModel(potential::Polynomial{{0, 0, 0, 1}}).is_quadratic());
    CHECK(PotentialModel(potential::Polynomial{{1, 2, 3, 0}}).is_quadratic());
}

TEST_CASE("validate_system") {
    CHECK_NOTHROW(validate_system({1.0, 1.0, 0.0}));
    CHECK_NOTHROW(validate_system({1.0, 1.0, 0.5}));
    auto message = [](PhysicalSystem s) {
        try {
            validate_system(s);
        } catch (const DomainError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message({-1.0, 1.0, 0.0}) == "mass must be positive");
    CHECK(message({1.0, 0.0, 0.0}) == "hbar must be positive");
    CHECK(message({1.0, 1.0, -0.1}) == "nu must be non-negative");
}

// dV against central differences of V; d2V against central differences of dV.
// The second difference of V at h = 1e-5 is dominated by cancellation
// (eps * |V| / h^2 ~ 1e-6 * |V|), so it cannot resolve 1e-6 on its own.
TEST_CASE("analytic derivatives agree with finite differences") {
    const PhysicalSystem sys{1.3, 1.0, 0.2};
    const std::vector<PotentialModel> models = {
        PotentialModel{},
        PotentialModel(potential::Linear{-0.7}),
        PotentialModel(potential::Harmonic{1.7, 0.4}),
        PotentialModel(potential::Polynomial{{0.3, -1.0, 0.5, 0.05, -0.01, 0.002, -1e-4}}),
    };
    const double h = 1e-5;
    for (const auto& pot : models) {
        double worst1 = 0.0, worst2 = 0.0;
        for (double x = -10.0; x <= 10.0; x += 0.125) {
            const auto c = potential_eval(pot, sys, x, 0.0);
            const auto p = potential_eval(pot, sys, x + h, 0.0);
            const auto m = potential_eval(pot, sys, x - h, 0.0);
            const double d1 = (p.value - m.value) / (2 * h);
            const double d2 = (p.first - m.first) / (2 * h);
            worst1 = std::max(worst1, std::abs(d1 - c.first) / std::max(std::abs(c.first), 1.0));
            worst2 = std::max(worst2, std::abs(d2 - c.second) / std::max(std::abs(c.second), 1.0));
        }
        CHECK(worst1 <= 1e-6);
        CHECK(worst2 <= 1e-6);
    }
}
