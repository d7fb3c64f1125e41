#pragma once

#include "ldgf/curves.hpp"
#include "ldgf/dissipation.hpp"
#include "ldgf/energy.hpp"

namespace ldgf {

struct FlowOptions {
    double tol = 1e-8;    ///< local error per unit time
    double h_max = 0.0;   ///< 0: T / 256
    double h_min = 1e-14;
    /// Caps steps at stiffness_cap / |df/dx|; 0 disables the cap.
    double stiffness_cap = 1.0;
};

/// dx/dt = -psi*'(dE/dx(x, t)) by adaptive implicit midpoint with step
/// doubling. Every output interval satisfies the midpoint relation
/// x_{i+1} - x_i = h f((x_i + x_{i+1}) / 2, t_i + h / 2). Leaving the domain
/// stops the curve with the truncated flag.
SampledCurve solve_dissipative_flow(const EnergyLandscape& landscape,
                                    const DissipationFamily& family, double x0, double T,
                                    const FlowOptions& options);

/// dx/dt = -2 alpha sinh(beta dE/dx).
SampledCurve solve_generalized_flow(const EnergyLandscape& landscape, double alpha, double beta,
                                    double x0, double T, double tol);

/// dx/dt = -2 omega dE/dx, without the stiffness cap.
SampledCurve solve_quadratic_flow(const EnergyLandscape& landscape, double omega, double x0,
                                  double T, double tol);

/// Stick-slip stepping of dx/dt in m_A(-dE/dx) on the load grid
/// k * dt_load (dt_load <= 0 selects T / 2048). Slides keep |dE/dx| = A;
/// when no such continuation exists the state jumps along the steepest
/// descent at frozen time to the next point with |dE/dx| <= A, and the jump
/// time is inserted into the grid.
BVCurve solve_rate_independent(const EnergyLandscape& landscape, double A, double x0, double T,
                               double dt_load = 0.0);

}  // namespace ldgf
