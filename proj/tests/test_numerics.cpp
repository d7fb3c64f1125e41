#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ldgf/errors.hpp"
#include "ldgf/numerics.hpp"

using namespace ldgf;

TEST_CASE("gauss-legendre integrates polynomials of degree 2n-1 exactly") {
    const GaussLegendre rule(5);
    const double v = rule.integrate([](double x) { return std::pow(x, 9) + 3 * x * x; }, 0.0, 2.0);
    CHECK(v == doctest::Approx(102.4 + 8.0).epsilon(1e-14));
}

TEST_CASE("adaptive gauss handles a kink") {
    const double v = adaptive_gauss([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-13);
    CHECK(v == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));
}

TEST_CASE("golden section finds the maximum of a concave map") {
    const auto [x, f] = golden_section_max([](double w) { return 3 * w - 0.5 * w * w; }, {-10, 10}, 1e-10);
    CHECK(x == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(f == doctest::Approx(4.5).epsilon(1e-14));
}

TEST_CASE("bisection") {
    CHECK(bisect([](double x) { return x * x - 2; }, 0, 2, 1e-14) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1; }, 0, 2, 1e-14), Error);
}

TEST_CASE("rng streams are reproducible and roughly uniform") {
    Rng a(42), b(42);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = a.uniform();
        CHECK_EQ(u, b.uniform());
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    Rng c(7);
    double m = 0.0, m2 = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double z = c.normal();
        m += z;
        m2 += z * z;
    }
    CHECK(std::abs(m / 200000) < 0.01);
    CHECK(m2 / 200000 == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("statistics helpers") {
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(sample_variance(v) == doctest::Approx(5.0 / 3.0));
    const std::vector<double> x{0, 1, 2}, y{1, 3, 5};
    const auto [s, c] = linear_fit(x, y);
    CHECK(s == doctest::Approx(2.0));
    CHECK(c == doctest::Approx(1.0));
}
