#include <cmath>

#include "doctest.h"
#include "ldgf/energy.hpp"
#include "ldgf/errors.hpp"

using namespace ldgf;

namespace {

LandscapeSpec loading_spec() {
    return {"quadratic_loading", {{"rate", 1.0}, {"x_min", -2.0}, {"x_max", 2.0}, {"T", 1.0}}, {}};
}

void check_finite_differences(const EnergyLandscape& E) {
    const Domain& d = E.domain();
    const double h = 1e-5;
    for (int i = 1; i < 10; ++i) {
        for (int j = 1; j < 10; ++j) {
            const double x = d.x_min + (d.x_max - d.x_min) * i / 10.0;
            const double t = d.T * j / 10.0;
            const double fd_x = (E.value(x + h, t) - E.value(x - h, t)) / (2 * h);
            const double fd_t = (E.value(x, t + h) - E.value(x, t - h)) / (2 * h);
            const double fd_xx = (E.gradient(x + h, t) - E.gradient(x - h, t)) / (2 * h);
            CHECK(std::abs(fd_x - E.gradient(x, t)) <= 1e-6 * std::max(1.0, std::abs(E.gradient(x, t))));
            CHECK(std::abs(fd_t - E.time_derivative(x, t)) <=
                  1e-6 * std::max(1.0, std::abs(E.time_derivative(x, t))));
            CHECK(std::abs(fd_xx - E.curvature(x, t)) <= 1e-6 * std::max(1.0, std::abs(E.curvature(x, t))));
        }
    }
}

}  // namespace

TEST_CASE("linear tilt") {
    const auto E = make_builtin({"linear_tilt", {{"g", 1.0}}, {}});
    CHECK(E.gradient(0.3, 0.2) == 1.0);
    CHECK(E.grad_bound() == 1.0);
    CHECK(E.grad_time_lipschitz() == 0.0);
    const auto report = validate(E, SampleGrid::uniform(E.domain(), 17, 5));
    CHECK(report.passed());
    CHECK(report.empirical_grad_bound == 1.0);
}

TEST_CASE("quadratic loading gradient bound matches a direct scan") {
    const auto E = make_builtin(loading_spec());
    CHECK(E.gradient(0.0, 0.0) == 0.0);
    // Oracle: max |x - t| over the domain by brute-force scan.
    double scan = 0.0;
    for (int i = 0; i <= 400; ++i) {
        for (int j = 0; j <= 100; ++j) scan = std::max(scan, std::abs(-2.0 + 4.0 * i / 400 - j / 100.0));
    }
    CHECK(scan == doctest::Approx(3.0));
    CHECK(E.grad_bound() == doctest::Approx(scan).epsilon(1e-15));
    CHECK(E.grad_time_lipschitz() == 1.0);
}

TEST_CASE("oscillating loading range includes interior extremes") {
    const auto E = make_builtin({"quadratic_loading",
                                 {{"rate", 0.0}, {"amplitude", 0.5}, {"period", 1.0}, {"x_min", -1}, {"x_max", 1}}, {}});
    CHECK(E.grad_bound() == doctest::Approx(1.5));
    CHECK(validate(E, SampleGrid::uniform(E.domain(), 41, 401)).passed());
}

TEST_CASE("validate catches a mis-declared gradient bound") {
    const auto E = make_builtin({"linear_tilt", {{"g", 1.0}}, {}});
    const auto bad = E.with_regularity({0.5, 0.0, 0.0});
    const auto report = validate(bad, SampleGrid::uniform(E.domain(), 5, 5));
    CHECK_FALSE(report.passed());
    CHECK_FALSE(report.check("grad_bound").passed);
    CHECK(report.check("grad_bound").worst == 1.0);
}

TEST_CASE("double well passes validation with a reported empirical bound") {
    const auto E = make_builtin({"double_well_loading",
                                 {{"a", 0.25}, {"force_rate", 0.5}, {"x_min", -2}, {"x_max", 2}, {"T", 2}}, {}});
    const auto report = validate(E, SampleGrid::uniform(E.domain(), 100, 100));
    CHECK(report.passed());
    CHECK(report.empirical_grad_bound <= E.grad_bound());
    CHECK(report.empirical_grad_bound > 0.9 * E.grad_bound());
}

TEST_CASE("builtins match finite differences") {
    check_finite_differences(make_builtin(loading_spec()));
    check_finite_differences(make_builtin({"quadratic_loading",
                                           {{"amplitude", 0.3}, {"period", 0.5}, {"x_min", -2}, {"x_max", 2}}, {}}));
    check_finite_differences(make_builtin({"double_well_loading",
                                           {{"a", 0.5}, {"force0", 0.1}, {"force_rate", 0.3}, {"x_min", -2}, {"x_max", 2}}, {}}));
    check_finite_differences(make_builtin({"custom",
                                           {{"grad_bound", 100.0}, {"grad_time_lipschitz", 10.0}, {"x_min", -2}, {"x_max", 2}},
                                           {{"c", {1.0, 0.5, 2.0, 0.0, 0.25}}, {"d", {0.0, 1.0}}}}));
}

TEST_CASE("custom landscape evaluates its polynomial") {
    const auto E = make_builtin({"custom", {{"grad_bound", 10.0}, {"grad_time_lipschitz", 1.0}},
                                 {{"c", {1.0, 0.0, 1.0}}, {"d", {0.0, 1.0}}}});
    CHECK(E.value(2.0, 0.5) == doctest::Approx(1.0 + 0.5 * 2.0 + 4.0));
    CHECK(E.gradient(2.0, 0.5) == doctest::Approx(0.5 + 4.0));
    CHECK(E.time_derivative(2.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(make_builtin({"nope", {}, {}}), Error);
    CHECK_THROWS_AS(make_builtin({"linear_tilt", {}, {}}), Error);
    CHECK_THROWS_AS(make_builtin({"linear_tilt", {{"g", 1.0}, {"x_max", INFINITY}}, {}}), Error);
    const auto E = make_builtin({"linear_tilt", {{"g", 1.0}}, {}});
    CHECK_THROWS_AS(validate(E, SampleGrid{}), Error);
}

TEST_CASE("wiggly landscape adds the scaled periodic wiggle") {
    const auto base = make_builtin({"linear_tilt", {{"g", 0.3}}, {}});
    const WigglyLandscape W(base, 50, 0.7);
    for (int i = 0; i < 100; ++i) {
        const double x = -3.0 + 0.0617 * i;
        CHECK(std::abs(W.value(x, 0.1) - base.value(x, 0.1) - W.wiggle(50 * x) / 50) <=
              4e-16 * std::max(1.0, std::abs(base.value(x, 0.1))));
        CHECK(W.wiggle(x + 2.0) == doctest::Approx(W.wiggle(x)).epsilon(1e-12));
    }
    CHECK(W.wiggle(1.0) == doctest::Approx(0.0));
    CHECK(W.wiggle(0.0) == doctest::Approx(0.7));
}
