#include "ldgf/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ldgf/errors.hpp"

namespace ldgf {

namespace {

// Largest argument for which exp() stays finite.
constexpr double kMaxExp = 709.0;

double sign(double v) { return (v > 0.0) - (v < 0.0); }

void require_positive(double v, const char* what) {
    require(std::isfinite(v) && v > 0.0, std::string(what) + " must be positive and finite");
}

}  // namespace

double log_psi_star_derivative(const DissipationFamily& f, double w) {
    switch (f.tag) {
        case FamilyTag::cosh:
            return f.log_alpha + f.beta * w + std::log(-std::expm1(-2.0 * f.beta * w));
        case FamilyTag::vanishing_viscosity:
            return w > f.threshold ? std::log(2.0 * f.beta * (w - f.threshold))
                                   : -std::numeric_limits<double>::infinity();
        case FamilyTag::quadratic_limit:
            return std::log(2.0 * f.omega * w);
        case FamilyTag::rate_independent:
            break;
    }
    fail(ErrorCode::invalid_argument, "rate_independent family has no smooth dual derivative");
}

std::string_view to_string(FamilyTag tag) {
    switch (tag) {
        case FamilyTag::cosh: return "cosh";
        case FamilyTag::vanishing_viscosity: return "vanishing_viscosity";
        case FamilyTag::quadratic_limit: return "quadratic_limit";
        case FamilyTag::rate_independent: return "rate_independent";
    }
    return "unknown";
}

FamilyTag family_tag_from_string(std::string_view name) {
    for (FamilyTag t : {FamilyTag::cosh, FamilyTag::vanishing_viscosity, FamilyTag::quadratic_limit,
                        FamilyTag::rate_independent}) {
        if (to_string(t) == name) return t;
    }
    fail(ErrorCode::invalid_argument, "unknown dissipation family '" + std::string(name) + "'");
}

DissipationFamily DissipationFamily::cosh(double alpha, double beta) {
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    DissipationFamily f;
    f.tag = FamilyTag::cosh;
    f.alpha = alpha;
    f.log_alpha = std::log(alpha);
    f.beta = beta;
    return f;
}

DissipationFamily DissipationFamily::cosh_threshold(double A, double beta) {
    require(A >= 0.0 && std::isfinite(A), "threshold A must be nonnegative");
    require_positive(beta, "beta");
    DissipationFamily f;
    f.tag = FamilyTag::cosh;
    f.log_alpha = -beta * A;
    f.alpha = std::exp(f.log_alpha);
    f.beta = beta;
    f.threshold = A;
    f.alpha_from_threshold = true;
    return f;
}

DissipationFamily DissipationFamily::vanishing_viscosity(double beta, double A) {
    require_positive(beta, "beta");
    require(A >= 0.0 && std::isfinite(A), "threshold A must be nonnegative");
    DissipationFamily f;
    f.tag = FamilyTag::vanishing_viscosity;
    f.beta = beta;
    f.threshold = A;
    return f;
}

DissipationFamily DissipationFamily::quadratic_limit(double omega) {
    require_positive(omega, "omega");
    DissipationFamily f;
    f.tag = FamilyTag::quadratic_limit;
    f.omega = omega;
    return f;
}

DissipationFamily DissipationFamily::rate_independent(double A) {
    require(A >= 0.0 && std::isfinite(A), "threshold A must be nonnegative");
    DissipationFamily f;
    f.tag = FamilyTag::rate_independent;
    f.threshold = A;
    return f;
}

DissipationFamily DissipationFamily::at_beta(double new_beta) const {
    require_positive(new_beta, "beta");
    DissipationFamily f = *this;
    f.beta = new_beta;
    if (tag == FamilyTag::cosh && alpha_from_threshold) {
        f.log_alpha = -new_beta * threshold;
        f.alpha = std::exp(f.log_alpha);
    }
    return f;
}

double DissipationFamily::delta() const {
    switch (tag) {
        case FamilyTag::cosh:
        case FamilyTag::quadratic_limit:
            return std::log(beta) / beta;
        case FamilyTag::vanishing_viscosity:
            return std::cbrt(1.0 / beta);
        case FamilyTag::rate_independent:
            break;
    }
    fail(ErrorCode::invalid_argument, "rate_independent family has no delta rule");
}

double DissipationFamily::K() const {
    const double w = threshold + delta();
    require(w > 0.0, "K is undefined for A + delta <= 0");
    return std::exp(-log_psi_star_derivative(*this, w));
}

double psi(const DissipationFamily& f, double v) {
    const double a = std::abs(v);
    switch (f.tag) {
        case FamilyTag::cosh: {
            const double two_alpha = 2.0 * f.alpha;
            if (a <= two_alpha) {
                const double x = a / two_alpha;
                const double root = std::sqrt(1.0 + x * x);
                // x asinh(x) - (sqrt(1 + x^2) - 1)
                return two_alpha / f.beta * (x * std::asinh(x) - x * x / (root + 1.0));
            }
            // r = 2 alpha / |v| < 1; asinh(1/r) = -log r + log(1 + sqrt(1 + r^2))
            const double log_inv_r = std::log(a) - std::numbers::ln2 - f.log_alpha;
            const double r = std::exp(-log_inv_r);
            const double root = std::sqrt(1.0 + r * r);
            return a / f.beta * (log_inv_r + std::log1p(root) - root + r);
        }
        case FamilyTag::vanishing_viscosity:
            return f.threshold * a + v * v / (4.0 * f.beta);
        case FamilyTag::quadratic_limit:
            return v * v / (4.0 * f.omega);
        case FamilyTag::rate_independent:
            return f.threshold * a;
    }
    return 0.0;
}

ExtendedReal psi_star(const DissipationFamily& f, double w) {
    const double a = std::abs(w);
    switch (f.tag) {
        case FamilyTag::cosh: {
            const double exponent = f.log_alpha + f.beta * a;
            if (exponent > kMaxExp) return ExtendedReal::infinity();
            const double s = -std::expm1(-f.beta * a);
            return std::exp(exponent) * s * s / f.beta;
        }
        case FamilyTag::vanishing_viscosity: {
            const double excess = std::max(a - f.threshold, 0.0);
            return f.beta * excess * excess;
        }
        case FamilyTag::quadratic_limit:
            return f.omega * w * w;
        case FamilyTag::rate_independent:
            if (a <= f.threshold) return 0.0;
            return ExtendedReal::infinity();
    }
    return 0.0;
}

double psi_derivative(const DissipationFamily& f, double v) {
    const double a = std::abs(v);
    switch (f.tag) {
        case FamilyTag::cosh: {
            const double two_alpha = 2.0 * f.alpha;
            if (a <= two_alpha) return std::asinh(v / two_alpha) / f.beta;
            const double log_inv_r = std::log(a) - std::numbers::ln2 - f.log_alpha;
            const double r = std::exp(-log_inv_r);
            return sign(v) * (log_inv_r + std::log1p(std::sqrt(1.0 + r * r))) / f.beta;
        }
        case FamilyTag::vanishing_viscosity:
            return f.threshold * sign(v) + v / (2.0 * f.beta);
        case FamilyTag::quadratic_limit:
            return v / (2.0 * f.omega);
        case FamilyTag::rate_independent:
            return f.threshold * sign(v);
    }
    return 0.0;
}

double psi_star_derivative(const DissipationFamily& f, double w) {
    const double a = std::abs(w);
    switch (f.tag) {
        case FamilyTag::cosh: {
            if (a == 0.0) return 0.0;
            const double exponent = f.log_alpha + f.beta * a;
            return sign(w) * std::exp(exponent) * (-std::expm1(-2.0 * f.beta * a));
        }
        case FamilyTag::vanishing_viscosity:
            return 2.0 * f.beta * sign(w) * std::max(a - f.threshold, 0.0);
        case FamilyTag::quadratic_limit:
            return 2.0 * f.omega * w;
        case FamilyTag::rate_independent:
            if (a <= f.threshold) return 0.0;
            fail(ErrorCode::invalid_argument, "psi*' of the rate_independent family is infinite here");
    }
    return 0.0;
}

double legendre(const ScalarFn& f, double v, Interval bound) {
    require(bound.lo < bound.hi, "legendre: empty search bound");
    auto objective = [&](double w) { return v * w - f(w); };
    const double h = 1e-6 * bound.width();
    const bool rising_at_lo = objective(bound.lo + h) > objective(bound.lo);
    const bool falling_at_hi = objective(bound.hi - h) > objective(bound.hi);
    if (!rising_at_lo || !falling_at_hi) {
        fail(ErrorCode::widen_bound, "legendre: maximizer not interior to the search bound");
    }
    const double x_tol = 1e-12 * std::max(1.0, bound.width());
    return golden_section_max(objective, bound, x_tol).second;
}

namespace {

struct Rates {
    double log_r_plus;
    double log_r_minus;
};

Rates rates(double x, double t, const EnergyLandscape& landscape, double alpha, double beta) {
    if (!landscape.domain().contains(x, t)) {
        fail(ErrorCode::domain_exit, "rate evaluation outside the landscape domain");
    }
    require_positive(alpha, "alpha");
    require_positive(beta, "beta");
    const double bg = beta * landscape.gradient(x, t);
    const double la = std::log(alpha);
    return {la - bg, la + bg};
}

}  // namespace

double hamiltonian(double x, double p, double t, const EnergyLandscape& landscape, double alpha,
                   double beta) {
    const Rates r = rates(x, t, landscape, alpha, beta);
    return std::exp(r.log_r_plus) * std::expm1(p) + std::exp(r.log_r_minus) * std::expm1(-p);
}

double lagrangian(double x, double v, double t, const EnergyLandscape& landscape, double alpha,
                  double beta) {
    const Rates r = rates(x, t, landscape, alpha, beta);
    const double r_plus = std::exp(r.log_r_plus);
    const double r_minus = std::exp(r.log_r_minus);
    const double c = 4.0 * alpha * alpha;  // 4 r+ r-
    const double root = std::sqrt(v * v + c);
    // v + sqrt(v^2 + c), rewritten for v < 0 to avoid cancellation.
    const double num = v >= 0.0 ? v + root : c / (root - v);
    const double log_term = std::log(num) - std::numbers::ln2 - r.log_r_plus;
    return v * log_term - root + r_plus + r_minus;
}

ConditionReport check_conditions(const DissipationFamily& family,
                                 const std::vector<double>& beta_sequence, double M, double R) {
    require(family.tag != FamilyTag::rate_independent,
            "check_conditions needs a beta-dependent family");
    require(!beta_sequence.empty(), "check_conditions: empty beta sequence");
    for (std::size_t i = 1; i < beta_sequence.size(); ++i) {
        require(beta_sequence[i] > beta_sequence[i - 1], "check_conditions: beta sequence must increase");
    }
    require_positive(M, "M");
    require_positive(R, "R");

    constexpr int grid_points = 512;
    ConditionReport report;
    report.tag = family.tag;
    report.M = M;
    report.R = R;
    report.eta_bound = R;

    for (double beta : beta_sequence) {
        const DissipationFamily f = family.at_beta(beta);
        ConditionRow row;
        row.beta = beta;
        row.delta = f.delta();
        row.K = f.K();
        const double A = f.threshold;
        const double floor = A + row.delta;
        const double log_K = std::log(row.K);

        double sup = 0.0;
        for (int i = 0; i < grid_points; ++i) {
            const double w = -R + 2.0 * R * i / (grid_points - 1);
            const double a = std::abs(w);
            const double log_ratio =
                log_psi_star_derivative(f, a + M * row.K) - log_psi_star_derivative(f, std::max(a, floor)) + log_K;
            sup = std::max(sup, std::exp(log_ratio));
        }
        row.sup_ratio = sup;
        row.threshold_term = std::exp(log_psi_star_derivative(f, A + M * row.K) + log_K);

        double eta_max = 0.0;
        for (int i = 0; i < grid_points; ++i) {
            const double w = R * i / (grid_points - 1);
            const double base = log_psi_star_derivative(f, w);
            if (!std::isfinite(base)) {
                // psi*'(w) = 0: eta = 0 solves the equation. For the
                // vanishing-viscosity family this is the unenforced |w| < A branch.
                if (f.tag == FamilyTag::vanishing_viscosity && w > 0.0) row.eta_subthreshold_skipped = true;
                continue;
            }
            const double target = base + std::numbers::ln2;
            auto g = [&](double eta) { return log_psi_star_derivative(f, w + eta) - target; };
            double hi = std::max(1e-6, w);
            for (int k = 0; k < 200 && g(hi) < 0.0; ++k) hi *= 2.0;
            eta_max = std::max(eta_max, bisect(g, 0.0, hi, 1e-10));
        }
        row.eta_max = eta_max;
        report.rows.push_back(row);
    }

    auto decreasing = [&](auto member) {
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            if (!(report.rows[i].*member < report.rows[i - 1].*member)) return false;
        }
        return true;
    };
    report.K_decreasing = decreasing(&ConditionRow::K);
    report.sup_ratio_decreasing = decreasing(&ConditionRow::sup_ratio);
    report.threshold_term_decreasing = decreasing(&ConditionRow::threshold_term);
    report.eta_bounded = std::all_of(report.rows.begin(), report.rows.end(),
                                     [&](const ConditionRow& r) { return r.eta_max <= report.eta_bound; });
    report.pass = report.K_decreasing && report.sup_ratio_decreasing &&
                  report.threshold_term_decreasing && report.eta_bounded;
    return report;
}

}  // namespace ldgf
