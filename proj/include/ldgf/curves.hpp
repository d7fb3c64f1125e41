#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace ldgf {

/// A real number or +infinity. Infinity is a flag, never an overflowed double.
class ExtendedReal {
public:
    constexpr ExtendedReal(double v) : value_(v), infinite_(false) {}  // NOLINT(implicit)

    static constexpr ExtendedReal infinity() { return ExtendedReal(); }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    /// Throws if infinite.
    double value() const;
    constexpr double value_or(double fallback) const { return infinite_ ? fallback : value_; }

    friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return ExtendedReal(a.value_ + b.value_);
    }

private:
    constexpr ExtendedReal() : value_(0.0), infinite_(true) {}

    double value_;
    bool infinite_;
};

/// Absolutely continuous curve sampled on a strictly increasing grid; linear
/// between samples.
///
/// `dt` optionally carries the step lengths explicitly. Recovery curves need
/// it: their fast transitions last far less than one ulp of `t`, so the step
/// lengths cannot be recovered from the rounded times.
struct SampledCurve {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> dt;
    bool truncated = false;  ///< solver or simulator left the domain
    double exit_time = std::numeric_limits<double>::quiet_NaN();

    std::size_t size() const { return t.size(); }
    std::size_t intervals() const { return t.empty() ? 0 : t.size() - 1; }
    double step(std::size_t i) const { return dt.empty() ? t[i + 1] - t[i] : dt[i]; }
    double start_time() const { return t.front(); }
    double end_time() const { return t.back(); }
    double max_step() const;

    /// Linear interpolation, clamped to the end values outside the grid.
    double value_at(double time) const;
};

SampledCurve make_uniform_curve(double t0, double t1, std::size_t intervals,
                                const std::vector<double>& values);

/// Sup-norm distance between two curves, evaluated on the union of their
/// sample times inside the common time window.
double sup_distance(const SampledCurve& a, const SampledCurve& b);

/// Discontinuity of a BV curve at a grid time: x(t-) -> x(t) -> x(t+).
struct Jump {
    std::size_t index = 0;  ///< grid index with t[index] == time
    double time = 0.0;
    double x_left = 0.0;
    double x_plateau = 0.0;
    double x_right = 0.0;
};

/// BV curve: linear between grid points, plus jumps at selected grid times.
/// `x[i]` is the value x(t_i); at a jump time it equals the plateau, which for
/// every curve the solvers produce equals the left limit.
struct BVCurve {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<Jump> jumps;  ///< ordered by index

    std::size_t size() const { return t.size(); }
    double start_time() const { return t.front(); }
    double end_time() const { return t.back(); }

    const Jump* jump_at(std::size_t index) const;
    /// x(t_i+) : start of the AC piece on [t_i, t_{i+1}].
    double right_limit(std::size_t i) const;
    /// x(t_i-) : end of the AC piece on [t_{i-1}, t_i].
    double left_limit(std::size_t i) const;
    double initial_value() const { return x.front(); }
    double final_value() const { return right_limit(size() - 1); }

    double total_variation() const;

    /// Throws inadmissible_curve when grid, values, or jumps are inconsistent.
    void check_consistency() const;

    static BVCurve from_sampled(const SampledCurve& curve);
};

}  // namespace ldgf
