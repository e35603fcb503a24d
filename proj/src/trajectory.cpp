#include "kostin/trajectory.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "kostin/csv.hpp"
#include "kostin/error.hpp"

namespace kostin {

namespace {

void check_initial(const InitialConditions& ic) {
    if (!(ic.a0 > 0.0)) throw DomainError("initial width a0 must be positive");
    if (!std::isfinite(ic.x0) || !std::isfinite(ic.v0) || !std::isfinite(ic.b0) ||
        !std::isfinite(ic.a0)) {
        throw DomainError("initial conditions must be finite");
    }
}

TrajectoryState axpy(const TrajectoryState& s, const StateRates& k, double h) {
    return {s.t + h,          s.q + h * k.dq,       s.qdot + h * k.dqdot,
            s.a + h * k.da,   s.adot + h * k.dadot, s.S0 + h * k.dS0};
}

StateRates stage(const TrajectoryState& s, const PhysicalSystem& sys, const PotentialModel& pot) {
    if (!(s.a > 0.0)) {
        std::ostringstream msg;
        msg << "width became non-positive (a = " << s.a << ") at t = " << s.t;
        throw IntegratorFailure(msg.str(), s.t);
    }
    return derivatives(s, sys, pot);
}

TrajectoryState rk4_step(const TrajectoryState& s, double h, const PhysicalSystem& sys,
                         const PotentialModel& pot) {
    const StateRates k1 = stage(s, sys, pot);
    const StateRates k2 = stage(axpy(s, k1, 0.5 * h), sys, pot);
    const StateRates k3 = stage(axpy(s, k2, 0.5 * h), sys, pot);
    const StateRates k4 = stage(axpy(s, k3, h), sys, pot);
    const double w = h / 6.0;
    TrajectoryState out{
        s.t + h,
        s.q + w * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq),
        s.qdot + w * (k1.dqdot + 2.0 * k2.dqdot + 2.0 * k3.dqdot + k4.dqdot),
        s.a + w * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da),
        s.adot + w * (k1.dadot + 2.0 * k2.dadot + 2.0 * k3.dadot + k4.dadot),
        s.S0 + w * (k1.dS0 + 2.0 * k2.dS0 + 2.0 * k3.dS0 + k4.dS0),
    };
    if (!(out.a > 0.0)) {
        throw IntegratorFailure("width became non-positive at t = " + std::to_string(out.t), out.t);
    }
    return out;
}

void check_span(double t_final, double dt) {
    if (!(t_final > 0.0)) throw DomainError("t_final must be positive");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (dt > t_final) throw DomainError("dt must not exceed t_final");
}

// Number of RK4 steps; the final one may be shorter.
std::size_t step_count(double t_final, double dt) {
    const double ratio = t_final / dt;
    auto n = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
        n = static_cast<std::size_t>(std::ceil(ratio));
    }
    return n == 0 ? 1 : n;
}

template <class Visit>
TrajectoryState run(const InitialConditions& ic, const PhysicalSystem& sys,
                    const PotentialModel& pot, double t_final, double dt, Visit&& visit) {
    check_initial(ic);
    validate_system(sys);
    check_span(t_final, dt);
    TrajectoryState s = initial_state(ic, sys);
    visit(s);
    const std::size_t n = step_count(t_final, dt);
    for (std::size_t i = 0; i < n; ++i) {
        const double t_next = (i + 1 == n) ? t_final : static_cast<double>(i + 1) * dt;
        s = rk4_step(s, t_next - s.t, sys, pot);
        s.t = t_next;
        visit(s);
    }
    return s;
}

}  // namespace

TrajectoryState initial_state(const InitialConditions& ic, const PhysicalSystem& sys) {
    return {0.0, ic.x0, ic.v0, ic.a0, ic.b0, sys.mass * ic.v0 * ic.x0 / sys.hbar};
}

StateRates derivatives(const TrajectoryState& s, const PhysicalSystem& sys,
                       const PotentialModel& pot) {
    if (!(s.a > 0.0)) throw DomainError("width a must be positive");
    const double m = sys.mass;
    const double hbar = sys.hbar;
    const double nu = sys.nu;
    const PotentialSample V = potential_eval(pot, sys, s.q, s.t);
    const double a2 = s.a * s.a;

    StateRates r;
    r.dq = s.qdot;
    r.dqdot = -nu * s.qdot - V.first / m;
    r.da = s.adot;
    r.dadot = -nu * s.adot - (V.second / m) * s.a + hbar * hbar / (4.0 * m * m * a2 * s.a);
    r.dS0 = (0.5 * m * s.qdot * s.qdot - V.value - hbar * hbar / (4.0 * m * a2)) / hbar - nu * s.S0;
    return r;
}

TrajectorySeries integrate(const InitialConditions& ic, const PhysicalSystem& sys,
                           const PotentialModel& pot, double t_final, double dt) {
    TrajectorySeries series;
    series.initial = ic;
    series.dt = dt;
    series.t_final = t_final;
    check_span(t_final, dt);
    series.states.reserve(step_count(t_final, dt) + 1);
    run(ic, sys, pot, t_final, dt, [&](const TrajectoryState& s) { series.states.push_back(s); });
    if (ic.a0 < kSmallWidthWarning) {
        series.warnings.emplace_back(
            "initial width below 1e-6: the hbar^2/(4 m^2 a^3) term is stiff, consider a smaller dt");
    }
    return series;
}

TrajectoryState advance(const InitialConditions& ic, const PhysicalSystem& sys,
                        const PotentialModel& pot, double t_final, double dt) {
    return run(ic, sys, pot, t_final, dt, [](const TrajectoryState&) {});
}

ResidualCoefficients residual_coefficients(const TrajectoryState& s, const StateRates& rates,
                                           const PhysicalSystem& sys, const PotentialModel& pot) {
    const double m = sys.mass;
    const double hbar = sys.hbar;
    const double nu = sys.nu;
    const PotentialSample V = potential_eval(pot, sys, s.q, s.t);
    const double a2 = s.a * s.a;
    const double rate = s.adot / s.a;

    ResidualCoefficients c;
    c.c0 = hbar * rates.dS0 - 0.5 * m * s.qdot * s.qdot + V.value + hbar * nu * s.S0 +
           hbar * hbar / (4.0 * m * a2);
    c.c1 = m * rates.dqdot + nu * m * s.qdot + V.first;
    c.c2 = 0.5 * m * rates.dadot / s.a + 0.5 * m * nu * rate + 0.5 * V.second -
           hbar * hbar / (8.0 * m * a2 * a2);
    return c;
}

void write_trajectory_csv(std::ostream& os, const TrajectorySeries& series) {
    os << "t,q,qdot,a,adot,S0\n";
    for (const auto& s : series.states) {
        write_csv_row(os, {s.t, s.q, s.qdot, s.a, s.adot, s.S0});
    }
}

}  // namespace kostin
