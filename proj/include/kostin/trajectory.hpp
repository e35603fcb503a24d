#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kostin/model.hpp"

namespace kostin {

/// Initial centre, centre velocity, width and width velocity of the packet.
struct InitialConditions {
    double x0 = 0.0;
    double v0 = 0.0;
    double a0 = 1.0;
    double b0 = 0.0;
};

/// Closed dynamical state of the linearized packet: centre q, width a and
/// centre phase S0 (dimensionless, psi = phi exp(iS)).
struct TrajectoryState {
    double t = 0.0;
    double q = 0.0;
    double qdot = 0.0;
    double a = 1.0;
    double adot = 0.0;
    double S0 = 0.0;
};

/// Time derivatives of (q, qdot, a, adot, S0).
struct StateRates {
    double dq = 0.0;
    double dqdot = 0.0;
    double da = 0.0;
    double dadot = 0.0;
    double dS0 = 0.0;
};

/// Coefficients of (x-q)^0, (x-q)^1, (x-q)^2 of the real-part (Hamilton-Jacobi)
/// equation after substituting the Gaussian ansatz. Zero on an exact solution.
struct ResidualCoefficients {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Widths below this are accepted but flagged: the a^-3 term becomes stiff.
inline constexpr double kSmallWidthWarning = 1e-6;

struct TrajectorySeries {
    InitialConditions initial;
    double dt = 0.0;
    double t_final = 0.0;
    std::vector<TrajectoryState> states;
    std::vector<std::string> warnings;
};

/// State at t = 0; S0(0) = m v0 x0 / hbar.
TrajectoryState initial_state(const InitialConditions& ic, const PhysicalSystem& sys);

StateRates derivatives(const TrajectoryState& s, const PhysicalSystem& sys,
                       const PotentialModel& pot);

/// Fixed-step classic RK4 from t = 0 to t_final. The last step is shortened so
/// that t_final is hit exactly.
TrajectorySeries integrate(const InitialConditions& ic, const PhysicalSystem& sys,
                           const PotentialModel& pot, double t_final, double dt);

/// Same stepping as integrate() but keeps only the final state.
TrajectoryState advance(const InitialConditions& ic, const PhysicalSystem& sys,
                        const PotentialModel& pot, double t_final, double dt);

ResidualCoefficients residual_coefficients(const TrajectoryState& s, const StateRates& rates,
                                           const PhysicalSystem& sys, const PotentialModel& pot);

/// CSV with header "t,q,qdot,a,adot,S0".
void write_trajectory_csv(std::ostream& os, const TrajectorySeries& series);

}  // namespace kostin
