#pragma once

#include <limits>
#include <vector>

#include "ldgf/curves.hpp"
#include "ldgf/dissipation.hpp"
#include "ldgf/energy.hpp"

namespace ldgf {

/// An action value split into its contributions; `total` is their sum.
/// For J_RI, `part_work` holds E(x(T), T) - E(x(0), 0) - int dE/dt.
struct ActionReport {
    ExtendedReal total = 0.0;
    double part_psi = 0.0;
    double part_psi_star = 0.0;
    double part_work = 0.0;
    double part_jump = 0.0;
    double part_var = 0.0;
    double quadrature_step = 0.0;  ///< largest grid step
    double violation_time = std::numeric_limits<double>::quiet_NaN();
};

/// Quadrature used by every AC action: on each grid interval the velocity is
/// the secant slope and the integrand is evaluated at the interval midpoint
/// (x_mid, t_mid). Throws domain_exit if a node lies outside the domain.
ActionReport action_J_beta(const SampledCurve& curve, const EnergyLandscape& landscape,
                           const DissipationFamily& family);
/// beta * J_beta for the cosh family with the given alpha, beta.
ActionReport action_J_alpha_beta(const SampledCurve& curve, const EnergyLandscape& landscape,
                                 double alpha, double beta);
ActionReport action_J_Q(const SampledCurve& curve, const EnergyLandscape& landscape, double omega);

/// int psi(x') + int psi*(dE/dx) + E(x(T), T) - E(x(0), 0) - int dE/dt.
double energy_identity_residual(const SampledCurve& curve, const EnergyLandscape& landscape,
                                const DissipationFamily& family);

enum class JumpCostMode { closed_form, brute_force };

/// Energy-weighted jump cost at frozen time t: the cheapest path from x0 to
/// x1 weighted by max(|dE/dx|, A).
double jump_cost_delta(double x0, double x1, double t, const EnergyLandscape& landscape, double A,
                       JumpCostMode mode = JumpCostMode::closed_form);

struct BruteForcePath {
    double cost = 0.0;
    std::vector<double> nodes;  ///< visited grid positions, x0 first
    bool monotone = true;
};

/// Shortest path on a grid of about `grid_points` positions covering the
/// segment plus margins of a quarter of its length on both sides (clipped to
/// the domain). Edge weights use composite Simpson with 64 subintervals.
BruteForcePath jump_cost_brute_force(double x0, double x1, double t,
                                     const EnergyLandscape& landscape, double A,
                                     std::size_t grid_points = 1000);

/// J_RI: A * AC variation + energy-weighted jump costs + E(T) - E(0) - int
/// dE/dt. Returns an infinite total (and the offending time) when an AC node
/// violates |dE/dx| <= A + constraint_tol. The Cantor part is always zero.
ActionReport action_J_RI(const BVCurve& curve, const EnergyLandscape& landscape, double A,
                         double constraint_tol = 1e-9);

struct Variation {
    double total = 0.0;
    double ac = 0.0;
    double jump = 0.0;
};

Variation variation(const BVCurve& curve);
/// Sum of |x_{i+1} - x_i|.
double variation(const SampledCurve& curve);

}  // namespace ldgf
