#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "kostin/error.hpp"
#include "kostin/packet.hpp"
#include "kostin/pde.hpp"
#include "kostin/trajectory.hpp"

using namespace kostin;

namespace {

const SpatialGrid kBox = SpatialGrid::half_open(-20.0, 20.0, 2048);

PhaseGauge analytic_gauge(const TrajectoryState& s, const PhysicalSystem& sys, const SpatialGrid& g) {
    PhaseGauge gauge;
    for (std::size_t j = 0; j < g.n; ++j) gauge.phase.push_back(packet_phase(s, sys, g.x(j)));
    return gauge;
}

std::vector<ComplexGridField> evolve(const InitialConditions& ic, const PhysicalSystem& sys,
                                     const PotentialModel& pot, double t, double dt, std::size_t every,
                                     const SpatialGrid& g = kBox) {
    const auto s0 = initial_state(ic, sys);
    return kostin_evolve(packet_psi(s0, sys, g), sys, pot, SolverConfig{g, dt}, t, every,
                         analytic_gauge(s0, sys, g));
}

double ansatz_distance(const ComplexGridField& f, const InitialConditions& ic, const PhysicalSystem& sys,
                       const PotentialModel& pot) {
    const auto st = f.time_tag > 0.0 ? advance(ic, sys, pot, f.time_tag, 1e-3) : initial_state(ic, sys);
    return relative_l2_distance(f, packet_psi(st, sys, f.grid));
}

// Width ODE with the curvature term V'' not multiplied by a.
double unscaled_width(const InitialConditions& ic, const PhysicalSystem& sys, double omega, double t_end,
                     double dt) {
    auto rhs = [&](const std::array<double, 2>& y) {
        const double a = y[0], adot = y[1];
        return std::array<double, 2>{
            adot, -sys.nu * adot - omega * omega +
                      sys.hbar * sys.hbar / (4 * sys.mass * sys.mass * a * a * a)};
    };
    std::array<double, 2> y{ic.a0, ic.b0};
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t i = 0; i < steps; ++i) {
        auto k1 = rhs(y);
        auto k2 = rhs({y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]});
        auto k3 = rhs({y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]});
        auto k4 = rhs({y[0] + dt * k3[0], y[1] + dt * k3[1]});
        for (int c = 0; c < 2; ++c) y[c] += dt / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        if (!(y[0] > 0.0)) return std::nan("");
    }
    return y[0];
}

}  // namespace

TEST_CASE("solver config guards") {
    CHECK_THROWS_AS(check_solver_config(SolverConfig{SpatialGrid{-10, 0.1, 200}, 1e-3}), DomainError);
    CHECK_THROWS_AS(check_solver_config(SolverConfig{kBox, 0.0}), DomainError);
    CHECK_NOTHROW(check_solver_config(SolverConfig{kBox, 1e-3}));
}

TEST_CASE("free spreading width") {
    const InitialConditions ic{0, 0, 1, 0};
    const PhysicalSystem sys{1, 1, 0};
    const auto snaps = evolve(ic, sys, PotentialModel{}, 1.0, 1e-3, 100);
    REQUIRE(snaps.size() == 11);
    CHECK(std::abs(snaps.back().time_tag - 1.0) <= 0.5e-3);
    for (const auto& f : snaps) {
        const double a2 = 1.0 + std::pow(f.time_tag / 2.0, 2);
        CHECK(std::abs(density_moments(f).variance / a2 - 1.0) <= 1e-4);
        CHECK(ansatz_distance(f, ic, sys, PotentialModel{}) <= 1e-3);
    }
}

TEST_CASE("steps preserve the norm") {
    const PhysicalSystem sys{1, 1, 0.4};
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const auto s0 = initial_state({1.0, 0.3, 0.6, 0.1}, sys);
    auto f = packet_psi(s0, sys, kBox);
    const double n0 = l2_norm(f);
    for (int i = 0; i < 20; ++i) {
        f = kostin_step(f, sys, pot, SolverConfig{kBox, 1e-3});
        CHECK(std::abs(l2_norm(f) - 1.0) <= 1e-10);
    }
    CHECK(std::abs(l2_norm(f) - n0) <= 1e-12);
}

TEST_CASE("evolve bookkeeping") {
    const PhysicalSystem sys{};
    const auto s0 = initial_state({0, 0, 1, 0}, sys);
    const auto f0 = packet_psi(s0, sys, kBox);
    const auto only = kostin_evolve(f0, sys, PotentialModel{}, SolverConfig{kBox, 1e-2}, 5e-3, 1);
    REQUIRE(only.size() == 1);
    CHECK(only[0].values == f0.values);
    const auto some = kostin_evolve(f0, sys, PotentialModel{}, SolverConfig{kBox, 1e-2}, 0.104, 3);
    CHECK(some.size() == 5);  // f0, steps 3, 6, 9, 10
    CHECK(std::abs(some.back().time_tag - 0.104) <= 0.5e-2);
    CHECK_THROWS_AS(kostin_evolve(f0, sys, PotentialModel{}, SolverConfig{kBox, 1e-2}, 0.1, 0), DomainError);
}

TEST_CASE("snapshots stay normalized") {
    const PhysicalSystem sys{1, 1, 0.2};
    const auto snaps = evolve({1, 0, std::sqrt(0.5), 0}, sys, PotentialModel(potential::Harmonic{}), 2.0,
                              1e-3, 100);
    for (const auto& f : snaps) CHECK(std::abs(l2_norm(f) * l2_norm(f) - 1.0) <= 1e-9);
}

TEST_CASE("centroid follows the damped centre equation") {
    const PhysicalSystem sys{1, 1, 0.5};
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const InitialConditions ic{1.0, 0.5, 0.5, 0.2};
    for (const auto& f : evolve(ic, sys, pot, 2.0, 1e-3, 100)) {
        const auto st = f.time_tag > 0 ? advance(ic, sys, pot, f.time_tag, 1e-3) : initial_state(ic, sys);
        CHECK(std::abs(density_moments(f).mean - st.q) <= 1e-3);
    }
}

TEST_CASE("centroid slows down under friction") {
    const PhysicalSystem sys{1, 1, 0.5};
    const auto snaps = evolve({0, 1, 1, 0}, sys, PotentialModel{}, 2.0, 1e-3, 100,
                              SpatialGrid::half_open(-20.48, 20.48, 4096));
    double prev_speed = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < snaps.size(); ++k) {
        const double speed = (density_moments(snaps[k]).mean - density_moments(snaps[k - 1]).mean) /
                             (snaps[k].time_tag - snaps[k - 1].time_tag);
        CHECK(speed > 0.0);
        CHECK(speed < prev_speed);
        prev_speed = speed;
    }
}

TEST_CASE("harmonic damped packet against the ansatz") {
    const PhysicalSystem sys{1, 1, 0.2};
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const InitialConditions ic{1, 0, std::sqrt(0.5), 0};
    std::vector<double> d;
    for (double dt : {1e-3, 5e-4, 2.5e-4}) d.push_back(ansatz_distance(evolve(ic, sys, pot, 2.0, dt, 1u << 20).back(), ic, sys, pot));
    CHECK(d[2] <= 5e-3);
    CHECK(d[0] / d[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(d[1] / d[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("width arbitration: a-scaled curvature term matches, unscaled one does not") {
    const PhysicalSystem sys{1, 1, 0.2};
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const InitialConditions ic{1, 0, 0.5, 0};
    const auto snaps = evolve(ic, sys, pot, 2.0, 5e-4, 400);
    double corrected = 0.0, unscaled = 0.0;
    for (const auto& f : snaps) {
        if (f.time_tag == 0.0) continue;
        const double width = std::sqrt(density_moments(f).variance);
        corrected = std::max(corrected, std::abs(width - advance(ic, sys, pot, f.time_tag, 1e-3).a));
        const double p = unscaled_width(ic, sys, 1.0, f.time_tag, 1e-3);
        unscaled = std::isnan(p) ? std::numeric_limits<double>::infinity()
                                : std::max(unscaled, std::abs(width - p));
    }
    CHECK(corrected <= 1e-3);
    CHECK(unscaled > 1e-2);
}

TEST_CASE("global phase of the initial field only shifts the global phase") {
    const PhysicalSystem sys{1, 1, 0.3};
    const PotentialModel pot(potential::Harmonic{1.0, 0.0});
    const auto s0 = initial_state({0.5, 0.2, 0.7, 0}, sys);
    const auto f0 = packet_psi(s0, sys, kBox);
    auto g0 = f0;
    for (auto& z : g0.values) z *= std::polar(1.0, 1.3);
    const SolverConfig cfg{kBox, 1e-3};
    const auto a = kostin_evolve(f0, sys, pot, cfg, 0.5, 1000).back();
    const auto b = kostin_evolve(g0, sys, pot, cfg, 0.5, 1000).back();
    cplx overlap = 0.0;
    for (std::size_t j = 0; j < kBox.n; ++j) overlap += std::conj(a.values[j]) * b.values[j];
    auto aligned = b;
    for (auto& z : aligned.values) z *= std::polar(1.0, -std::arg(overlap));
    CHECK(relative_l2_distance(aligned, a) <= 1e-10);
}

TEST_CASE("solver error paths") {
    const PhysicalSystem sys{};
    SUBCASE("packet touching the edge") {
        const auto s = initial_state({14.5, 0, 1, 0}, sys);
        CHECK_THROWS_AS(kostin_step(packet_psi(s, sys, kBox), sys, PotentialModel{}, SolverConfig{kBox, 1e-3}),
                        SolverError);
    }
    SUBCASE("split support") {
        const auto a = packet_psi(initial_state({-6, 0, 0.5, 0}, sys), sys, kBox);
        const auto b = packet_psi(initial_state({6, 0, 0.5, 0}, sys), sys, kBox);
        ComplexGridField f = a;
        for (std::size_t j = 0; j < kBox.n; ++j) f.values[j] = (a.values[j] + b.values[j]) / std::sqrt(2.0);
        CHECK_THROWS_AS(kostin_step(f, sys, PotentialModel{}, SolverConfig{kBox, 1e-3}), SolverError);
    }
    SUBCASE("unnormalized input") {
        auto f = packet_psi(initial_state({0, 0, 1, 0}, sys), sys, kBox);
        for (auto& z : f.values) z *= 1.01;
        CHECK_THROWS_AS(kostin_step(f, sys, PotentialModel{}, SolverConfig{kBox, 1e-3}), DomainError);
    }
}
