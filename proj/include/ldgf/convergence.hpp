#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ldgf/curves.hpp"
#include "ldgf/dissipation.hpp"
#include "ldgf/energy.hpp"
#include "ldgf/stochastic.hpp"

namespace ldgf {

/// A BV curve written as a Lipschitz path (t(s), x(s)) on [0, S], linear
/// between nodes. Jumps become s-intervals with constant t.
struct ParametrizedCurve {
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> x;
    double S = 0.0;
    /// Node indices splitting [0, S] into segments; first is 0, last is
    /// size() - 1. Every interior anchor is the end of a jump expansion.
    std::vector<std::size_t> anchors;

    std::size_t size() const { return s.size(); }
    double t_at(double s_value) const;
    double x_at(double s_value) const;
    double variation() const;
};

/// s(t) = t + A Var(x, [0, t]) + jump costs; each jump leg is traversed
/// monotonically at the frozen jump time with `jump_samples` intervals, and
/// its s-length equals the energy-weighted jump cost. Throws
/// inadmissible_curve when |dE/dx| > A (+ tolerance) on an AC node.
ParametrizedCurve reparametrize(const BVCurve& curve, const EnergyLandscape& landscape, double A,
                                std::size_t jump_samples = 2048, double constraint_tol = 1e-9);

/// int_0^S L(x, t, x', t') ds: A|x'| on intervals with t' > 0 and
/// |x'| max(A, |dE/dx|) (midpoint rule) on jump expansions.
double parametrized_dissipation(const ParametrizedCurve& pc, const EnergyLandscape& landscape,
                                double A);

struct RecoveryCurve {
    /// Carries explicit steps in `dt`: across a jump they are far below the
    /// resolution of t itself.
    SampledCurve curve;
    double lambda = 1.0;                ///< T_beta / T
    std::vector<double> segment_lambda;
};

/// Recovery curve for `family` at `beta`: on every s-interval
/// dt_beta/ds = max(dt/ds, |dx/ds| / psi*'(max(|dE/dx|, A + delta_beta))),
/// rescaled segment by segment so that segment endpoints keep their times.
/// x_beta is linear in t between the images of the s-nodes. Throws
/// degenerate_plateau when an interval has dt/ds = 0 and dx/ds = 0.
RecoveryCurve build_recovery_sequence(const ParametrizedCurve& pc, const EnergyLandscape& landscape,
                                      const DissipationFamily& family, double beta);

struct ConvergenceRow {
    double parameter = 0.0;
    std::vector<double> values;  ///< values[0] is compared with `reference`
    double reference = 0.0;
    double gap = 0.0;            ///< values[0] - reference
    double abs_gap = 0.0;
    double rel_gap = 0.0;        ///< abs_gap / |reference|, or abs_gap when reference = 0
    bool flagged = false;
    std::string note;
};

struct ConvergenceTable {
    std::string parameter_name;
    std::vector<std::string> value_names;
    std::string reference_name;
    std::vector<ConvergenceRow> rows;

    void add_row(double parameter, std::vector<double> values, double reference);
    std::string to_csv() const;
};

/// Rows (beta, J_beta, J_Q) with alpha = omega / beta on the same curve.
ConvergenceTable mosco_quadratic_experiment(const EnergyLandscape& landscape,
                                            const SampledCurve& curve, double omega,
                                            const std::vector<double>& beta_list);

/// Rows (beta, J_beta(x_beta), lambda) against J_RI(x). The family template is
/// moved to each beta with `at_beta`.
ConvergenceTable mosco_ri_experiment(const EnergyLandscape& landscape, const BVCurve& curve,
                                     const DissipationFamily& family_template,
                                     const std::vector<double>& beta_list);

/// Rows (n, median sup distance to the generalized flow, truncated count).
ConvergenceTable lln_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                double alpha, double beta, double x0, double T,
                                const EnsembleOptions& ensemble);

struct BridgeOptions {
    double delta = 1.0;
    double omega = 1.0;
    double h_target = 0.01;  ///< only used for delta = 1
    double x0 = 0.0;
    double T = 1.0;
    double sde_dt = 0.0;     ///< 0: min(1e-3, 0.25 / (omega * Lx))
};

/// beta_n = n^-delta (1 / (h n) for delta = 1), alpha_n = omega / beta_n.
/// For delta = 1 the rows compare the variance of X^n averaged over
/// t in [T/2, T] with that of the SDE with noise h; otherwise they compare
/// the mean of X^n(T) with the deterministic limit.
ConvergenceTable bridge_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                   const BridgeOptions& options, const EnsembleOptions& ensemble);

/// Rows (n, rate = -log(p_n)/n, p_n, stays, bound) where p_n is the fraction
/// of replicas staying within `tube_radius` of `reference` and the bound is
/// the smallest J_{alpha,beta} among the reference and its two shifted
/// edges. Rows with fewer than 5 stays are flagged; with none the rate is NaN.
ConvergenceTable ldp_tube_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                     double alpha, double beta, const SampledCurve& reference,
                                     double tube_radius, double x0, const EnsembleOptions& ensemble);

}  // namespace ldgf
