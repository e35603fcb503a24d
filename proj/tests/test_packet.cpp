#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kostin/error.hpp"
#include "kostin/packet.hpp"
#include "kostin/trajectory.hpp"

using namespace kostin;

namespace {

const double kPeak = 1.0 / std::sqrt(2.0 * std::numbers::pi);

TrajectoryState state(double q, double qdot, double a, double adot, double S0, double t = 0.0) {
    return {t, q, qdot, a, adot, S0};
}

SpatialGrid around(const TrajectoryState& s, double halfwidth_in_a, std::size_t n) {
    return SpatialGrid::closed(s.q - halfwidth_in_a * s.a, s.q + halfwidth_in_a * s.a, n);
}

}  // namespace

TEST_CASE("density examples") {
    const auto s = state(0, 0, 1, 0, 0);
    CHECK(packet_density(s, 0.0) == doctest::Approx(kPeak).epsilon(1e-12));
    CHECK(packet_density(s, 1.0) == doctest::Approx(kPeak * std::exp(-0.5)).epsilon(1e-12));
    CHECK(packet_density(s, 1.0) == doctest::Approx(0.2419707).epsilon(1e-6));

    const auto moved = state(0.7, 0, 1.3, 0, 0);
    const auto g = SpatialGrid::closed(moved.q - 10 * moved.a, moved.q + 10 * moved.a, 2001);
    std::vector<double> rho;
    for (std::size_t j = 0; j < g.n; ++j) rho.push_back(packet_density(moved, g.x(j)));
    CHECK(std::abs(trapezoid(rho, g.dx) - 1.0) <= 1e-10);
}

TEST_CASE("phase examples") {
    const PhysicalSystem sys{};
    const auto s = state(0.4, 1.3, 0.9, 0.2, 0.6);
    CHECK(packet_phase(s, sys, 0.4) == doctest::Approx(0.6));
    const auto still = state(0.4, 0.0, 0.9, 0.0, 0.6);
    CHECK(packet_phase(still, sys, -3.0) == doctest::Approx(0.6));
    CHECK(packet_phase(state(0, 2, 1, 0.5, 0), sys, 2.0) == doctest::Approx(5.0));
}

TEST_CASE("psi examples") {
    const PhysicalSystem sys{1.2, 0.9, 0.3};
    const auto s = state(0.5, 0.7, 0.8, 0.3, 1.5);
    const auto g = around(s, 12, 4097);
    const auto f = packet_psi(s, sys, g);
    CHECK(std::abs(l2_norm(f) - 1.0) <= 1e-8);
    for (std::size_t j = 0; j < g.n; j += 64)
        CHECK(std::abs(std::norm(f.values[j]) - packet_density(s, g.x(j))) <= 1e-12);

    SUBCASE("initial phase") {
        const InitialConditions ic{0.5, 0.8, 0.7, 0.25};
        const auto s0 = initial_state(ic, sys);
        for (double x : {-1.0, 0.0, 0.3, 2.0}) {
            const double expected = sys.mass * ic.v0 * x / sys.hbar +
                                    sys.mass * ic.b0 * (x - ic.x0) * (x - ic.x0) / (2 * sys.hbar * ic.a0);
            CHECK(std::abs(packet_phase(s0, sys, x) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("norm along a series") {
    const PhysicalSystem sys{1, 1, 0.4};
    const PotentialModel pot(potential::Harmonic{1.2, 0.0});
    for (const auto& s : integrate({1.0, 0.5, 0.6, 0.0}, sys, pot, 3.0, 0.05).states) {
        CHECK(std::abs(l2_norm(packet_psi(s, sys, around(s, 12, 2049))) - 1.0) <= 1e-8);
    }
}

TEST_CASE("velocity and quantum potential examples") {
    CHECK(quantum_velocity(state(0.3, 1.7, 1, 0.4, 0), 0.3) == doctest::Approx(1.7));
    CHECK(quantum_velocity(state(0.3, 1.7, 1, 0.0, 0), -4.0) == doctest::Approx(1.7));
    CHECK(quantum_velocity(state(0, 3, 2, 1, 0), 4.0) == doctest::Approx(5.0));
    const PhysicalSystem sys{};
    CHECK(quantum_potential_gaussian(state(0, 0, 1, 0, 0), sys, 0.0) == doctest::Approx(0.25));
    CHECK(std::abs(quantum_potential_gaussian(state(1, 0, 1.5, 0, 0), sys, 1 + std::sqrt(2.0) * 1.5)) <= 1e-14);
}

TEST_CASE("finite-difference quantum potential") {
    const PhysicalSystem sys{};
    const auto s = state(0.0, 0.0, 1.0, 0.0, 0.0);
    auto worst_within = [&](std::size_t n, double reach) {
        const auto g = SpatialGrid::closed(-8.0, 8.0, n);
        std::vector<double> phi;
        for (std::size_t j = 0; j < g.n; ++j) phi.push_back(packet_amplitude(s, g.x(j)));
        const auto vq = quantum_potential_field(phi, g, sys);
        CHECK(vq.front() == vq[1]);
        CHECK(vq.back() == vq[g.n - 2]);
        double err = 0.0;
        for (std::size_t j = 1; j + 1 < g.n; ++j)
            if (std::abs(g.x(j)) <= reach)
                err = std::max(err, std::abs(vq[j] - quantum_potential_gaussian(s, sys, g.x(j))));
        return err;
    };
    CHECK(worst_within(1601, 3.0) <= 1e-5);  // dx = 0.01
    CHECK(worst_within(8001, 3.0) <= 1e-6);  // dx = 0.002

    SUBCASE("constant amplitude") {
        std::vector<double> c(64, 0.3);
        for (double v : quantum_potential_field(c, SpatialGrid{0, 0.1, 64}, sys)) CHECK(v == 0.0);
    }
    SUBCASE("interior zero") {
        std::vector<double> c(64, 0.3);
        c[20] = 0.0;
        CHECK_THROWS_AS(quantum_potential_field(c, SpatialGrid{0, 0.1, 64}, sys), DomainError);
    }
}

TEST_CASE("madelung roundtrip") {
    const PhysicalSystem sys{1, 1, 0.2};
    // Strong chirp and drift so the raw phase wraps many times.
    const auto s = state(0.5, 6.0, 1.0, 0.8, 40.0, 1.0);
    const auto g = SpatialGrid::closed(-11.5, 12.5, 4801);
    const auto f = packet_psi(s, sys, g);
    const auto h = madelung_decompose(f, sys);
    CHECK(h.connected);

    double offset = h.S[h.peak] - packet_phase(s, sys, g.x(h.peak));
    const double k = std::round(offset / (2 * std::numbers::pi));
    CHECK(std::abs(offset - 2 * std::numbers::pi * k) <= 1e-8);
    double phase_err = 0.0, vel_err = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        if (!h.mask[j]) continue;
        const double x = g.x(j);
        phase_err = std::max(phase_err, std::abs(h.S[j] - packet_phase(s, sys, x) - offset));
        if (std::abs(x - s.q) <= 6.0 * s.a && j > 0 && j + 1 < g.n)
            vel_err = std::max(vel_err, std::abs(h.v[j] - quantum_velocity(s, x)));
    }
    CHECK(phase_err <= 1e-8);
    CHECK(vel_err <= 1e-5);

    const auto back = madelung_recompose(h, f.time_tag);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n; ++j)
        if (h.mask[j]) worst = std::max(worst, std::abs(back.values[j] - f.values[j]));
    CHECK(worst <= 1e-10);

    SUBCASE("masked tails carry the nearest phase") {
        std::size_t first = 0;
        while (!h.mask[first]) ++first;
        REQUIRE(first > 0);
        CHECK(h.S[0] == h.S[first]);
    }
}

TEST_CASE("constant phase field") {
    const auto g = SpatialGrid::closed(-5, 5, 201);
    ComplexGridField f{g, {}, 0.0};
    for (std::size_t j = 0; j < g.n; ++j) f.values.push_back(std::polar(std::exp(-g.x(j) * g.x(j) / 4), 0.7));
    const auto h = madelung_decompose(f, PhysicalSystem{});
    for (std::size_t j = 0; j < g.n; ++j) {
        CHECK(h.S[j] == doctest::Approx(0.7));
        CHECK(std::abs(h.v[j]) <= 1e-12);
    }
}

TEST_CASE("split support is reported as disconnected") {
    const auto g = SpatialGrid::closed(-10, 10, 401);
    ComplexGridField f{g, {}, 0.0};
    for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        f.values.push_back(std::exp(-(x - 5) * (x - 5)) + std::exp(-(x + 5) * (x + 5)));
    }
    CHECK_FALSE(madelung_decompose(f, PhysicalSystem{}).connected);
}

TEST_CASE("structure does not depend on nu") {
    const auto s = state(0.3, 1.1, 0.7, 0.2, 2.0);
    const auto g = around(s, 10, 513);
    const auto a = packet_psi(s, {1, 1, 0.0}, g);
    const auto b = packet_psi(s, {1, 1, 0.9}, g);
    CHECK(a.values == b.values);
}

TEST_CASE("continuity residual") {
    const PhysicalSystem sys{};
    const auto series = integrate({0.0, 1.0, 1.0, 0.0}, sys, PotentialModel{}, 0.5, 1e-3);
    const auto g = SpatialGrid::closed(-10.0, 11.0, 2101);
    const auto& st = series.states;
    double worst = 0.0;
    for (std::size_t k : {std::size_t{0}, std::size_t{250}, st.size() - 2}) {
        auto f0 = packet_psi(st[k], sys, g);
        auto f1 = packet_psi(st[k + 1], sys, g);
        f0.time_tag = st[k].t;
        f1.time_tag = st[k + 1].t;
        worst = std::max(worst, continuity_residual(f0, f1, sys));
    }
    CHECK(worst <= 1e-4);

    SUBCASE("stationary field") {
        const auto s = state(0.0, 0.0, 1.0, 0.0, 0.0);
        auto f0 = packet_psi(s, sys, g);
        auto f1 = f0;
        f1.time_tag = 1e-3;
        CHECK(continuity_residual(f0, f1, sys) <= 1e-10);
    }
    SUBCASE("guards") {
        const auto f = packet_psi(st[0], sys, g);
        CHECK_THROWS_AS(continuity_residual(f, f, sys), GridMismatch);
        auto other = packet_psi(st[1], sys, SpatialGrid::closed(-10.0, 11.0, 2001));
        other.time_tag = 1e-3;
        CHECK_THROWS_AS(continuity_residual(f, other, sys), GridMismatch);
    }
}

TEST_CASE("snapshot csv") {
    const auto s = state(0, 1, 1, 0, 0);
    std::ostringstream os;
    write_snapshot_csv(os, packet_psi(s, {}, SpatialGrid::closed(-12, 12, 97)), {});
    const auto text = os.str();
    CHECK(text.rfind("x,re_psi,im_psi,rho,S,v,V_qu\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 98);
}
