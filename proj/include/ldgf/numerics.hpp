#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace ldgf {

using ScalarFn = std::function<double(double)>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Maximizes a concave (unimodal) function by golden-section search.
/// Returns (argmax, max). Stops once the bracket is below `x_tol`.
std::pair<double, double> golden_section_max(const ScalarFn& f, Interval bracket,
                                             double x_tol);

/// Bisection for a sign change of f on [lo, hi]; f(lo) and f(hi) must have
/// opposite signs (or one of them is zero).
double bisect(const ScalarFn& f, double lo, double hi, double tol, int max_iter = 200);

/// Gauss-Legendre rule on [-1, 1], nodes computed by Newton iteration.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order);
    double integrate(const ScalarFn& f, double a, double b) const;
};

/// Adaptive Gauss-Legendre quadrature: splits intervals until the rule on the
/// whole and on the two halves agree to `abs_tol`.
double adaptive_gauss(const ScalarFn& f, double a, double b, double abs_tol = 1e-12,
                      int order = 64, int max_depth = 30);

/// Random source used by every simulator. Transforms are written out by hand
/// so that a given seed yields identical streams across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }
    double exponential(double rate);
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Seed of replica `r` in an ensemble started from `seed`.
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t r) { return seed ^ r; }

double median(std::vector<double> values);
double mean(std::span<const double> values);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> values);

/// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace ldgf
