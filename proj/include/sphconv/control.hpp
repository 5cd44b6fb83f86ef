#pragma once

#include <utility>
#include <vector>

#include "sphconv/curve.hpp"

namespace sphconv {

// The optimal-control formulation runs in lambda = k1 = 1 units: the state is
// the contact radius x1 = g(theta) and its derivative x2 = g', the control is
// the radius of curvature u = R in [0, 1], and theta plays the role of time.

struct ControlState {
    double t = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double u = 0.0;
};

struct AdjointState {
    double p1 = 0.0;
    double p2 = 0.0;
    double lambda0 = 1.0; // abnormality multiplier, >= 0
    double lambda1 = 0.0; // length-constraint multiplier
};

// Piecewise-constant control: values[i] holds on [times[i], times[i+1]), the
// last value until 2*pi.  times[0] must be 0.
struct ControlSchedule {
    std::vector<double> times;
    std::vector<double> values;

    double value_at(double t) const;
    void validate() const;
};

struct ControlTrajectory {
    std::vector<double> t;
    std::vector<double> x1, x2, u;
    std::vector<double> p1, p2; // filled by verify_pmp
    std::vector<double> h1;     // switching function along the fit
    ControlSchedule schedule;
    double objective = 0.0;           // accumulated area integrand
    double constraint_integral = 0.0; // accumulated length, targets length_target
    double length_target = 0.0;
    double periodicity_residual = 0.0;
};

// Right-hand side of the controlled system: x1' = x2,
// x2' = u*((1+x1^2+x2^2)/(1+x1^2))^(3/2) - x1.
std::pair<double, double> dynamics(const ControlState& s);

struct HamiltonianParts {
    double h = 0.0;  // full Pontryagin function
    double h1 = 0.0; // coefficient of u (the switching function)
};
HamiltonianParts pontryagin_H(const ControlState& s, const AdjointState& a);

// Right-hand side of the adjoint system (-dH/dx).
std::pair<double, double> adjoint_rhs(const ControlState& s, const AdjointState& a);

// Bang-bang law: 1 on H1 > 0, 0 on H1 < 0, lambda1 on the switching set.
double bang_bang_control(double h1_value, double lambda1);

// Adjoint values annihilating H1 (the singular-arc candidate).
std::pair<double, double> singular_adjoint(double x1, double x2, double lambda1, double lambda0);

// -(d/du)(d^2 H1/dt^2) along the singular arc; strictly positive, which rules
// singular arcs out of optimal trajectories.
double legendre_clebsch_value(double x1, double x2);

// Integrates the controlled system with RK4 (fixed step 2*pi/2^16, exact
// segment boundaries) accumulating objective and constraint integrals.
// Throws BlowUpError if the state leaves the admissible box grossly.
ControlTrajectory integrate_trajectory(const ControlSchedule& schedule, double x1_0, double x2_0,
                                       double length_target);

struct PmpReport {
    bool consistent = false;   // signs of H1 match the schedule everywhere
    bool feasible = false;     // an adjoint fit within tolerance exists
    double lambda1 = 0.0;      // fitted constraint multiplier
    double p1_0 = 0.0, p2_0 = 0.0;
    double max_h1_at_switches = 0.0;
    double fit_residual = 0.0; // least-squares residual of the shooting fit
    double hamiltonian_drift = 0.0;
    std::vector<double> h1_at_switches;
};

// Reconstructs adjoints along the trajectory (lambda0 = 1), fitting lambda1
// and (p1(0), p2(0)) by linear least squares so that H1 vanishes at the
// schedule's switch points and p is 2*pi-periodic; then checks the bang-bang
// sign pattern of H1 against the schedule.
PmpReport verify_pmp(ControlTrajectory& traj);

// Schedule + initial state of the lune of the given length in lambda = k1 = 1
// units: u = 1 on the two arcs, u = 0 on the two vertex fans.
struct LuneProblem {
    ControlSchedule schedule;
    double x1_0 = 0.0;
    double x2_0 = 0.0;
};
LuneProblem lune_control_problem(double length);

} // namespace sphconv
