#include "ldgf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include "ldgf/errors.hpp"

namespace ldgf {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::domain_exit: return "domain_exit";
        case ErrorCode::widen_bound: return "widen_bound";
        case ErrorCode::nonconvergent: return "nonconvergent";
        case ErrorCode::runaway_jump: return "runaway_jump";
        case ErrorCode::inadmissible_curve: return "inadmissible_curve";
        case ErrorCode::degenerate_plateau: return "degenerate_plateau";
        case ErrorCode::low_statistics: return "low_statistics";
        case ErrorCode::too_few_transitions: return "too_few_transitions";
        case ErrorCode::config_invalid: return "config_invalid";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

std::pair<double, double> golden_section_max(const ScalarFn& f, Interval bracket,
                                             double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = bracket.lo;
    double b = bracket.hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
            break;
        }
    }
    // Best of the remaining probes and the bracket midpoint.
    std::pair<double, double> best{c, fc};
    if (fd > best.second) best = {d, fd};
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm > best.second) best = {m, fm};
    return best;
}

double bisect(const ScalarFn& f, double lo, double hi, double tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        fail(ErrorCode::nonconvergent, "bisect: no sign change on bracket");
    }
    for (int i = 0; i < max_iter && std::abs(hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

GaussLegendre::GaussLegendre(int order) {
    require(order >= 1, "GaussLegendre: order must be positive");
    nodes.resize(order);
    weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p0 / dp;
            if (std::abs(z - z_prev) < 1e-16) break;
        }
        nodes[i] = -z;
        nodes[order - 1 - i] = z;
        weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[order - 1 - i] = weights[i];
    }
}

double GaussLegendre::integrate(const ScalarFn& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * f(mid + half * nodes[i]);
    }
    return sum * half;
}

namespace {

double adaptive_step(const GaussLegendre& rule, const ScalarFn& f, double a, double b,
                     double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = rule.integrate(f, a, m);
    const double right = rule.integrate(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) <= abs_tol) {
        return left + right;
    }
    return adaptive_step(rule, f, a, m, left, 0.5 * abs_tol, depth - 1) +
           adaptive_step(rule, f, m, b, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double adaptive_gauss(const ScalarFn& f, double a, double b, double abs_tol, int order,
                      int max_depth) {
    if (a == b) return 0.0;
    static const GaussLegendre rule64(64);
    if (order != 64) {
        const GaussLegendre rule(order);
        return adaptive_step(rule, f, a, b, rule.integrate(f, a, b), abs_tol, max_depth);
    }
    const GaussLegendre& rule = rule64;
    const double whole = rule.integrate(f, a, b);
    return adaptive_step(rule, f, a, b, whole, abs_tol, max_depth);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
    return -std::log(uniform_pos()) / rate;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double median(std::vector<double> values) {
    require(!values.empty(), "median of empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + mid);
    return 0.5 * (lower + upper);
}

double mean(std::span<const double> values) {
    require(!values.empty(), "mean of empty sample");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return acc / static_cast<double>(values.size() - 1);
}

std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "linear_fit: need two or more paired points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    require(sxx > 0.0, "linear_fit: degenerate abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace ldgf
