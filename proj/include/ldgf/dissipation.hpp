#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ldgf/curves.hpp"
#include "ldgf/energy.hpp"
#include "ldgf/numerics.hpp"

namespace ldgf {

enum class FamilyTag { cosh, vanishing_viscosity, quadratic_limit, rate_independent };

std::string_view to_string(FamilyTag tag);
FamilyTag family_tag_from_string(std::string_view name);

/// Dissipation pair (psi, psi*) of one of four families:
///
///   cosh                 psi*(w) = (2 alpha / beta)(cosh(beta w) - 1)
///   vanishing_viscosity  psi*(w) = beta (|w| - A)_+^2
///   quadratic_limit      psi*(w) = omega w^2
///   rate_independent     psi*(w) = 0 on [-A, A], +inf outside
///
/// A cosh family built with `cosh_threshold` ties alpha to beta through
/// alpha = exp(-beta A); `at_beta` keeps that tie.
struct DissipationFamily {
    FamilyTag tag = FamilyTag::cosh;
    double alpha = 1.0;
    double log_alpha = 0.0;  ///< log(alpha), kept separately so exp(-beta A) never underflows
    double beta = 1.0;
    double omega = 1.0;
    double threshold = 0.0;  ///< A
    bool alpha_from_threshold = false;

    static DissipationFamily cosh(double alpha, double beta);
    static DissipationFamily cosh_threshold(double A, double beta);
    static DissipationFamily vanishing_viscosity(double beta, double A);
    static DissipationFamily quadratic_limit(double omega);
    static DissipationFamily rate_independent(double A);

    /// Member of the same family at another beta.
    DissipationFamily at_beta(double new_beta) const;

    /// delta_beta: log(beta)/beta for cosh and quadratic_limit,
    /// beta^(-1/3) for vanishing_viscosity.
    double delta() const;
    /// K_beta = 1 / psi*'(A + delta_beta).
    double K() const;
};

double psi(const DissipationFamily& family, double v);
ExtendedReal psi_star(const DissipationFamily& family, double w);
/// Derivative of psi; for rate_independent returns A sign(v) (0 at v = 0).
double psi_derivative(const DissipationFamily& family, double v);
/// Derivative of psi*; throws for rate_independent outside [-A, A].
double psi_star_derivative(const DissipationFamily& family, double w);

/// log psi*'(w) for w >= 0; -inf where psi*' vanishes. Throws for
/// rate_independent.
double log_psi_star_derivative(const DissipationFamily& family, double w);

/// sup_w { v w - f(w) } over `search_bound` by golden-section search.
/// Throws widen_bound when the concave objective is not increasing at the
/// left end and decreasing at the right end.
double legendre(const ScalarFn& f, double v, Interval search_bound);

/// Rates r+ = alpha exp(-beta dE/dx), r- = alpha exp(beta dE/dx); throws
/// domain_exit outside the landscape's domain.
double hamiltonian(double x, double p, double t, const EnergyLandscape& landscape, double alpha,
                   double beta);
double lagrangian(double x, double v, double t, const EnergyLandscape& landscape, double alpha,
                  double beta);

struct ConditionRow {
    double beta = 0.0;
    double delta = 0.0;
    double K = 0.0;
    double sup_ratio = 0.0;       ///< sup_|w|<=R psi*'(|w| + M K) / psi*'(|w| v (A + delta)) K
    double threshold_term = 0.0;  ///< psi*'(A + M K) K
    double eta_max = 0.0;         ///< max over the w-grid of eta(w, 2)
    bool eta_subthreshold_skipped = false;
};

struct ConditionReport {
    FamilyTag tag = FamilyTag::cosh;
    double M = 1.0;
    double R = 0.0;
    double eta_bound = 0.0;
    std::vector<ConditionRow> rows;
    bool K_decreasing = false;
    bool sup_ratio_decreasing = false;
    bool threshold_term_decreasing = false;
    bool eta_bounded = false;
    bool pass = false;
};

/// Samples conditions C and D along an increasing beta sequence. The
/// supremum uses a 512-point grid on [-R, R]; eta(w, 2) solves
/// psi*'(w + eta) = 2 psi*'(w) by bisection.
ConditionReport check_conditions(const DissipationFamily& family,
                                 const std::vector<double>& beta_sequence, double M, double R);

}  // namespace ldgf
