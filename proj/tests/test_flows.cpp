#include <cmath>

#include "doctest.h"
#include "ldgf/errors.hpp"
#include "ldgf/flows.hpp"

using namespace ldgf;

namespace {

EnergyLandscape loading(double T = 1.0, double x_lim = 2.0, double rate = 1.0) {
    return make_builtin({"quadratic_loading", {{"rate", rate}, {"x_min", -x_lim}, {"x_max", x_lim}, {"T", T}}, {}});
}

EnergyLandscape frozen_quadratic() {
    return make_builtin({"custom", {{"grad_bound", 2.0}, {"grad_time_lipschitz", 0.0}, {"x_min", -2}, {"x_max", 2}},
                         {{"c", {0.0, 0.0, 0.5}}}});
}

EnergyLandscape double_well() {
    return make_builtin({"double_well_loading",
                         {{"a", 0.125}, {"force_rate", 0.5}, {"x_min", -2}, {"x_max", 2}, {"T", 1}}, {}});
}

}  // namespace

TEST_CASE("generalized flow on a linear tilt") {
    const auto E = make_builtin({"linear_tilt", {{"g", 0.3}}, {}});
    const double tol = 1e-8;
    const auto c = solve_generalized_flow(E, 1.2, 2.0, 0.5, 1.0, tol);
    CHECK(std::abs(c.x.back() - (0.5 - 2 * 1.2 * std::sinh(2.0 * 0.3))) <= tol);
    CHECK(c.t.back() == 1.0);
    const auto flat = solve_generalized_flow(make_builtin({"linear_tilt", {{"g", 0.0}}, {}}), 1.0, 1.0, 0.5, 1.0, tol);
    for (double x : flat.x) CHECK(x == 0.5);
}

TEST_CASE("generalized flow approaches the quadratic flow for small beta") {
    const auto E = loading();
    const auto g = solve_generalized_flow(E, 10.0, 0.1, 0.0, 1.0, 1e-8);
    const auto q = solve_quadratic_flow(E, 1.0, 0.0, 1.0, 1e-8);
    CHECK(std::abs(g.x.back() - q.x.back()) <= 0.01);
}

TEST_CASE("quadratic flow against closed forms") {
    const auto E = frozen_quadratic();
    const auto c = solve_quadratic_flow(E, 0.7, 1.5, 1.0, 1e-10);
    CHECK(std::abs(c.x.back() / (1.5 * std::exp(-1.4)) - 1.0) <= 1e-6);

    const auto L = loading();
    const auto q = solve_quadratic_flow(L, 1.0, 0.0, 1.0, 1e-10);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double t = q.t[i];
        CHECK(std::abs(q.x[i] - (t - 0.5 * (1.0 - std::exp(-2.0 * t)))) <= 1e-7);
    }
}

TEST_CASE("stiff regime is solved without step underflow") {
    const auto E = loading();
    const auto c = solve_generalized_flow(E, std::exp(-50.0), 50.0, 0.0, 1.0, 1e-8);
    CHECK_FALSE(c.truncated);
    CHECK(c.t.back() == 1.0);
    // The lag behind the load settles near A = 1 when alpha = exp(-beta A).
    CHECK(c.x.back() < 0.05);
}

TEST_CASE("flows flag domain exit") {
    const auto E = make_builtin({"linear_tilt", {{"g", 1.0}, {"x_min", -0.5}, {"x_max", 0.5}}, {}});
    const auto c = solve_quadratic_flow(E, 1.0, 0.0, 1.0, 1e-8);
    CHECK(c.truncated);
    CHECK(c.exit_time == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("play operator on linear loading") {
    const auto E = loading(2.0, 3.0);
    const auto c = solve_rate_independent(E, 1.0, 0.0, 2.0);
    CHECK(c.jumps.empty());
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(std::abs(c.x[i] - std::max(0.0, c.t[i] - 1.0)) <= 1e-9);
    }
    // Oracle: the generalized flow with alpha = exp(-beta A) at beta = 200.
    const auto v = solve_dissipative_flow(E, DissipationFamily::cosh_threshold(1.0, 200.0), 0.0, 2.0, {});
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(std::abs(v.x[i] - std::max(0.0, v.t[i] - 1.0)) <= 0.05);
    }
}

TEST_CASE("permanent stick when the force stays below the threshold") {
    const auto E = make_builtin({"linear_tilt", {{"g", 0.5}}, {}});
    const auto c = solve_rate_independent(E, 1.0, 0.3, 1.0, 0.01);
    for (double x : c.x) CHECK(x == 0.3);
    CHECK_THROWS_AS(solve_rate_independent(make_builtin({"linear_tilt", {{"g", 2.0}}, {}}), 1.0, 0.0, 1.0), Error);
}

TEST_CASE("double well: a single jump across the barrier") {
    const auto E = double_well();
    const double A = 0.1;
    const auto c = solve_rate_independent(E, A, -1.0, 1.0);
    c.check_consistency();
    REQUIRE(c.jumps.size() == 1);
    const Jump& j = c.jumps.front();
    // The slide loses stability at x = -1/sqrt(3), where the well force is 1/(3 sqrt 3).
    const double f_jump = 0.5 * (1.0 / std::sqrt(3.0)) * (1.0 - 1.0 / 3.0) + A;
    CHECK(j.time == doctest::Approx(f_jump / 0.5).epsilon(1e-6));
    CHECK(j.x_left == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-4));
    CHECK(j.x_right == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-4));
    CHECK(std::abs(E.gradient(j.x_right, j.time)) <= A + 1e-9);

    // Oracle: vanishing-viscosity flow at beta = 1000, compared away from the jump.
    FlowOptions opts;
    opts.tol = 1e-7;
    const auto vv = solve_dissipative_flow(E, DissipationFamily::vanishing_viscosity(1000.0, A), -1.0, 1.0, opts);
    SampledCurve ri;
    ri.t = c.t;
    ri.x = c.x;
    for (double t : {0.2, 0.5, 0.7, 0.9, 1.0}) {
        CHECK(std::abs(vv.value_at(t) - ri.value_at(t)) <= 0.03);
    }
}

TEST_CASE("rate independence under time reparametrization") {
    const Domain d{-3.0, 3.0, 1.0};
    const auto E = make_quadratic_loading({[](double t) { return 2.0 * t; }, [](double) { return 2.0; }, 0.0, 2.0, 2.0}, d);
    const auto phi = [](double t) { return t * t; };
    const auto Ephi = make_quadratic_loading(
        {[&](double t) { return 2.0 * phi(t); }, [](double t) { return 4.0 * t; }, 0.0, 2.0, 4.0}, d);
    const double A = 0.5;
    const auto x = solve_rate_independent(E, A, 0.0, 1.0, 1.0 / 4096);
    const auto y = solve_rate_independent(Ephi, A, 0.0, 1.0, 1.0 / 4096);
    SampledCurve xs;
    xs.t = x.t;
    xs.x = x.x;
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::abs(y.x[i] - xs.value_at(phi(y.t[i]))) <= 2.0 / 4096);
    }
    // Monotone and 1-Lipschitz in the loading variable.
    for (std::size_t i = 1; i < x.size(); ++i) {
        CHECK(x.x[i] >= x.x[i - 1]);
        CHECK(x.x[i] - x.x[i - 1] <= 2.0 * (x.t[i] - x.t[i - 1]) + 1e-12);
    }
}
