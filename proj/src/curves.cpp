#include "ldgf/curves.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ldgf/errors.hpp"

namespace ldgf {

double ExtendedReal::value() const {
    if (infinite_) {
        fail(ErrorCode::invalid_argument, "ExtendedReal::value called on infinity");
    }
    return value_;
}

double SampledCurve::max_step() const {
    double m = 0.0;
    for (std::size_t i = 0; i < intervals(); ++i) m = std::max(m, step(i));
    return m;
}

double SampledCurve::value_at(double time) const {
    require(!t.empty(), "value_at on empty curve");
    if (time <= t.front()) return x.front();
    if (time >= t.back()) return x.back();
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t hi = static_cast<std::size_t>(it - t.begin());
    const std::size_t lo = hi - 1;
    const double span = t[hi] - t[lo];
    if (span <= 0.0) return x[hi];
    const double w = (time - t[lo]) / span;
    return x[lo] + w * (x[hi] - x[lo]);
}

SampledCurve make_uniform_curve(double t0, double t1, std::size_t intervals,
                                const std::vector<double>& values) {
    require(values.size() == intervals + 1, "make_uniform_curve: size mismatch");
    SampledCurve c;
    c.t.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        c.t[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(intervals);
    }
    c.t.back() = t1;
    c.x = values;
    return c;
}

double sup_distance(const SampledCurve& a, const SampledCurve& b) {
    const double lo = std::max(a.start_time(), b.start_time());
    const double hi = std::min(a.end_time(), b.end_time());
    double d = 0.0;
    for (const SampledCurve* c : {&a, &b}) {
        for (double time : c->t) {
            if (time < lo || time > hi) continue;
            d = std::max(d, std::abs(a.value_at(time) - b.value_at(time)));
        }
    }
    return d;
}

const Jump* BVCurve::jump_at(std::size_t index) const {
    const auto it = std::lower_bound(jumps.begin(), jumps.end(), index,
                                     [](const Jump& j, std::size_t i) { return j.index < i; });
    if (it != jumps.end() && it->index == index) return &*it;
    return nullptr;
}

double BVCurve::right_limit(std::size_t i) const {
    const Jump* j = jump_at(i);
    return j ? j->x_right : x[i];
}

double BVCurve::left_limit(std::size_t i) const {
    const Jump* j = jump_at(i);
    return j ? j->x_left : x[i];
}

double BVCurve::total_variation() const {
    double var = 0.0;
    for (std::size_t i = 0; i + 1 < size(); ++i) {
        var += std::abs(left_limit(i + 1) - right_limit(i));
    }
    for (const Jump& j : jumps) {
        var += std::abs(j.x_left - j.x_plateau) + std::abs(j.x_plateau - j.x_right);
    }
    return var;
}

void BVCurve::check_consistency() const {
    if (t.size() < 2 || t.size() != x.size()) {
        fail(ErrorCode::inadmissible_curve, "BVCurve needs at least two grid points and matching values");
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!(t[i + 1] > t[i])) {
            fail(ErrorCode::inadmissible_curve,
                 "BVCurve grid not strictly increasing at index " + std::to_string(i));
        }
    }
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        const Jump& j = jumps[k];
        if (j.index >= t.size() || t[j.index] != j.time) {
            fail(ErrorCode::inadmissible_curve, "jump time does not match its grid index");
        }
        if (k > 0 && jumps[k - 1].index >= j.index) {
            fail(ErrorCode::inadmissible_curve, "jumps must be strictly ordered by grid index");
        }
        if (x[j.index] != j.x_plateau) {
            fail(ErrorCode::inadmissible_curve, "grid value at a jump must equal its plateau");
        }
    }
}

BVCurve BVCurve::from_sampled(const SampledCurve& curve) {
    BVCurve bv;
    bv.t = curve.t;
    bv.x = curve.x;
    return bv;
}

}  // namespace ldgf
