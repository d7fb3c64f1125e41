#include <cmath>
#include <vector>

#include "doctest.h"
#include "ldgf/dissipation.hpp"
#include "ldgf/errors.hpp"

using namespace ldgf;

namespace {

// High-precision reference values (50-digit evaluation of the closed forms).
constexpr double kPsiCoshAt2 = 0.93432004929289595286;       // 2 log(1 + sqrt 2) - 2 sqrt 2 + 2
constexpr double kTwoCoshOneMinusOne = 1.08616126963048755696;  // 2 (cosh 1 - 1)

std::vector<DissipationFamily> sample_families() {
    return {DissipationFamily::cosh(1.0, 1.0), DissipationFamily::cosh(0.3, 4.0),
            DissipationFamily::cosh_threshold(1.0, 20.0), DissipationFamily::vanishing_viscosity(10.0, 1.0),
            DissipationFamily::quadratic_limit(0.7)};
}

Interval dual_bound(const DissipationFamily& f, double v) {
    const double w = psi_derivative(f, v);
    const double r = std::abs(w) + f.threshold + 1.0;
    return {-r, r};
}

}  // namespace

TEST_CASE("closed forms at reference points") {
    const auto c = DissipationFamily::cosh(1.0, 1.0);
    CHECK(psi(c, 0.0) == 0.0);
    CHECK(psi(c, 2.0) == doctest::Approx(kPsiCoshAt2).epsilon(1e-15));
    CHECK(psi_star(c, 0.0).value() == 0.0);
    CHECK(psi_star(c, 1.0).value() == doctest::Approx(kTwoCoshOneMinusOne).epsilon(1e-15));
    CHECK(psi(DissipationFamily::rate_independent(3.0), -2.0) == 6.0);
    CHECK(psi_star(DissipationFamily::vanishing_viscosity(10.0, 1.0), 1.5).value() == doctest::Approx(2.5));
    CHECK(psi_star(DissipationFamily::rate_independent(1.0), 2.0).is_infinite());
    CHECK(psi_star(DissipationFamily::rate_independent(1.0), -1.0).value() == 0.0);
}

TEST_CASE("large-argument cosh forms stay finite and accurate") {
    const auto f = DissipationFamily::cosh_threshold(1.0, 1000.0);
    // alpha = exp(-1000) underflows; the log form must not.
    CHECK(f.alpha == 0.0);
    CHECK(std::isfinite(psi(f, 3.0)));
    CHECK(psi_star(f, 0.5).value() == doctest::Approx(std::exp(-500.0) * 1e-3).epsilon(1e-12));
    CHECK(psi_star(f, 1.5).is_infinite() == false);
    CHECK(psi_star(f, 2.0).is_infinite());
    // psi'(psi*'(w)) = w
    for (double w : {1.01, 1.1, 1.3}) {
        CHECK(psi_derivative(f, psi_star_derivative(f, w)) == doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("symmetry and convexity on samples") {
    for (const auto& f : sample_families()) {
        double prev_slope = -INFINITY;
        for (int i = -40; i <= 40; ++i) {
            const double v = 0.25 * i;
            CHECK(psi(f, v) == psi(f, -v));
            CHECK(psi_star(f, 0.1 * v).value() == psi_star(f, -0.1 * v).value());
            const double slope = psi(f, v + 0.25) - psi(f, v);
            CHECK(slope >= prev_slope - 1e-12);
            prev_slope = slope;
        }
    }
}

TEST_CASE("derivatives match finite differences") {
    for (const auto& f : sample_families()) {
        for (double w : {-1.4, -0.6, 0.37, 1.2}) {
            const double h = 1e-6 * std::max(1.0, std::abs(w)) / std::max(1.0, f.beta);
            const double fd = (psi_star(f, w + h).value() - psi_star(f, w - h).value()) / (2 * h);
            const double exact = psi_star_derivative(f, w);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
        for (double v : {-3.0, -0.2, 0.5, 4.0}) {
            const double h = 1e-6;
            const double fd = (psi(f, v + h) - psi(f, v - h)) / (2 * h);
            CHECK(std::abs(fd - psi_derivative(f, v)) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("numeric legendre transform of psi* recovers psi") {
    const auto c = DissipationFamily::cosh(1.0, 1.0);
    const ScalarFn dual = [&](double w) { return psi_star(c, w).value(); };
    CHECK(legendre(dual, 0.0, {-5, 5}) == doctest::Approx(0.0));
    CHECK(std::abs(legendre(dual, 2.0, {-5, 5}) - psi(c, 2.0)) <= 1e-8);
    CHECK(legendre([](double w) { return 0.5 * w * w; }, 3.0, {-10, 10}) == doctest::Approx(4.5).epsilon(1e-12));
    for (const auto& f : sample_families()) {
        const ScalarFn g = [&](double w) { return psi_star(f, w).value(); };
        for (int i = -10; i <= 10; ++i) {
            const double v = 0.9 * i;
            CHECK(std::abs(legendre(g, v, dual_bound(f, v)) - psi(f, v)) <= 1e-8);
        }
    }
}

TEST_CASE("legendre rejects a bound that clips the maximizer") {
    const ScalarFn sq = [](double w) { return 0.5 * w * w; };
    CHECK_THROWS_AS(legendre(sq, 3.0, {-1, 1}), Error);
    try {
        legendre(sq, 3.0, {-1, 1});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::widen_bound);
    }
}

TEST_CASE("fenchel-young inequality with equality on the graph") {
    for (const auto& f : sample_families()) {
        for (int i = -8; i <= 8; ++i) {
            const double v = 0.7 * i;
            for (int j = -8; j <= 8; ++j) {
                const double w = 0.15 * j;
                const ExtendedReal d = psi_star(f, w);
                if (d.is_finite()) CHECK(psi(f, v) + d.value() - v * w >= -1e-12);
            }
            const double w = psi_derivative(f, v);
            const ExtendedReal d = psi_star(f, w);
            if (d.is_finite()) {
                CHECK(std::abs(psi(f, v) + d.value() - v * w) <= 1e-8 * std::max(1.0, std::abs(v * w)));
            }
        }
    }
}

TEST_CASE("threshold cosh family converges to the indicator") {
    const double A = 1.0;
    double prev_in = INFINITY, prev_out = 0.0;
    for (double beta : {1.0, 10.0, 100.0}) {
        const auto f = DissipationFamily::cosh_threshold(A, beta);
        const double in = psi_star(f, 0.8).value();
        const double out = psi_star(f, 1.2).value();
        CHECK(in < prev_in);
        CHECK(out > prev_out);
        prev_in = in;
        prev_out = out;
    }
    CHECK(prev_in < 1e-8);
    CHECK(prev_out > 1e5);
}

TEST_CASE("hamiltonian") {
    const auto E0 = make_builtin({"linear_tilt", {{"g", 0.0}}, {}});
    CHECK(hamiltonian(0.1, 0.0, 0.5, E0, 1.0, 1.0) == 0.0);
    CHECK(hamiltonian(0.1, 1.0, 0.5, E0, 1.0, 1.0) == doctest::Approx(kTwoCoshOneMinusOne).epsilon(1e-15));
    const auto E = make_builtin({"linear_tilt", {{"g", 0.4}}, {}});
    const double h = 1e-6;
    const double dH = (hamiltonian(0, h, 0, E, 1.5, 2.0) - hamiltonian(0, -h, 0, E, 1.5, 2.0)) / (2 * h);
    CHECK(dH == doctest::Approx(-2 * 1.5 * std::sinh(2.0 * 0.4)).epsilon(1e-8));
    CHECK_THROWS_AS(hamiltonian(20.0, 1.0, 0.0, E, 1.0, 1.0), Error);
}

TEST_CASE("lagrangian") {
    const auto E = make_builtin({"quadratic_loading", {{"x_min", -2}, {"x_max", 2}}, {}});
    const double alpha = 0.8, beta = 1.7, x = 0.4, t = 0.3;
    const double g = E.gradient(x, t);
    const double v_char = alpha * std::exp(-beta * g) - alpha * std::exp(beta * g);
    CHECK(std::abs(lagrangian(x, v_char, t, E, alpha, beta)) <= 1e-14);
    const auto E0 = make_builtin({"linear_tilt", {{"g", 0.0}}, {}});
    CHECK(lagrangian(0.0, 0.0, 0.0, E0, 1.0, 1.0) == 0.0);

    // Legendre transform of p -> H equals L.
    for (double v : {-3.0, -0.5, 0.0, 0.2, 2.5}) {
        const double r_plus = alpha * std::exp(-beta * g);
        const double p_star = std::log((v + std::sqrt(v * v + 4 * alpha * alpha)) / (2 * r_plus));
        const ScalarFn H = [&](double p) { return hamiltonian(x, p, t, E, alpha, beta); };
        CHECK(std::abs(legendre(H, v, {p_star - 4, p_star + 4}) - lagrangian(x, v, t, E, alpha, beta)) <= 1e-8);
    }
}

TEST_CASE("condition checker: cosh family") {
    const auto report = check_conditions(DissipationFamily::cosh_threshold(1.0, 1.0), {5, 10, 20, 40}, 1.0, 3.0);
    CHECK(report.pass);
    for (const auto& row : report.rows) CHECK(row.K * row.beta == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("condition checker: vanishing viscosity") {
    const auto report = check_conditions(DissipationFamily::vanishing_viscosity(1.0, 1.0), {10, 100, 1000}, 1.0, 3.0);
    CHECK(report.pass);
    for (const auto& row : report.rows) {
        CHECK(row.K == doctest::Approx(1.0 / (2 * row.beta * std::cbrt(1.0 / row.beta))));
        CHECK(row.eta_subthreshold_skipped);
    }
}

TEST_CASE("condition checker: negative control") {
    const auto report = check_conditions(DissipationFamily::quadratic_limit(0.5), {5, 10, 20, 40}, 1.0, 3.0);
    CHECK_FALSE(report.pass);
    CHECK_FALSE(report.K_decreasing);
    CHECK_THROWS_AS(check_conditions(DissipationFamily::quadratic_limit(0.5), {5, 5}, 1.0, 3.0), Error);
}
