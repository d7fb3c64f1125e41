#include "ldgf/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ldgf/errors.hpp"
#include "ldgf/numerics.hpp"

namespace ldgf {

namespace {

double psi_star_second_derivative(const DissipationFamily& f, double w) {
    const double a = std::abs(w);
    switch (f.tag) {
        case FamilyTag::cosh:
            return f.beta * std::exp(f.log_alpha + f.beta * a) * (1.0 + std::exp(-2.0 * f.beta * a));
        case FamilyTag::vanishing_viscosity:
            return a > f.threshold ? 2.0 * f.beta : 0.0;
        case FamilyTag::quadratic_limit:
            return 2.0 * f.omega;
        case FamilyTag::rate_independent:
            break;
    }
    fail(ErrorCode::invalid_argument, "dissipative flow needs a smooth dissipation family");
}

class MidpointStepper {
public:
    MidpointStepper(const EnergyLandscape& landscape, const DissipationFamily& family)
        : landscape_(landscape), family_(family) {}

    double rhs(double x, double t) const {
        return -psi_star_derivative(family_, landscape_.gradient(x, t));
    }

    double jacobian(double x, double t) const {
        return -psi_star_second_derivative(family_, landscape_.gradient(x, t)) *
               landscape_.curvature(x, t);
    }

    /// Solves y = x + h f((x + y) / 2, t + h / 2) by Newton's method.
    std::optional<double> step(double x, double t, double h) const {
        const double tm = t + 0.5 * h;
        double y = x + h * rhs(x, t);
        if (!std::isfinite(y)) y = x;
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (x + y);
            const double G = y - x - h * rhs(m, tm);
            const double dG = 1.0 - 0.5 * h * jacobian(m, tm);
            if (!std::isfinite(G) || !std::isfinite(dG) || dG == 0.0) return std::nullopt;
            const double dy = G / dG;
            y -= dy;
            if (std::abs(dy) <= 2e-16 * std::max(1.0, std::abs(y))) return y;
        }
        return std::nullopt;
    }

private:
    const EnergyLandscape& landscape_;
    const DissipationFamily& family_;
};

}  // namespace

SampledCurve solve_dissipative_flow(const EnergyLandscape& landscape,
                                    const DissipationFamily& family, double x0, double T,
                                    const FlowOptions& options) {
    require(T > 0.0 && T <= landscape.domain().T, "flow horizon outside the landscape domain");
    require(landscape.domain().contains(x0, 0.0), "flow start outside the landscape domain");
    require(options.tol > 0.0, "flow tolerance must be positive");
    const MidpointStepper stepper(landscape, family);
    const double h_max = options.h_max > 0.0 ? options.h_max : T / 256.0;

    SampledCurve curve;
    curve.t.push_back(0.0);
    curve.x.push_back(x0);
    double t = 0.0;
    double x = x0;
    double h = std::min(h_max, 1e-3 * T);
    while (t < T) {
        bool last = false;
        if (h >= T - t) {
            h = T - t;
            last = true;
        }
        if (options.stiffness_cap > 0.0) {
            const double J = std::abs(stepper.jacobian(x, t));
            if (J * h > options.stiffness_cap) {
                h = options.stiffness_cap / J;
                last = false;
            }
        }
        if (h < options.h_min || t + 0.5 * h <= t) {
            fail(ErrorCode::nonconvergent, "flow step size underflow at t = " + std::to_string(t) +
                                               ", x = " + std::to_string(x));
        }
        const auto one = stepper.step(x, t, h);
        const auto half = stepper.step(x, t, 0.5 * h);
        const auto two = half ? stepper.step(*half, t + 0.5 * h, 0.5 * h) : std::nullopt;
        if (!one || !two) {
            h *= 0.25;
            continue;
        }
        const double err = std::abs(*two - *one) / 3.0;
        if (err > options.tol * h) {
            h *= std::max(0.2, 0.9 * std::sqrt(options.tol * h / err));
            continue;
        }
        const double t_next = last ? T : t + h;
        for (const auto& [tt, xx] : {std::pair{t + 0.5 * h, *half}, std::pair{t_next, *two}}) {
            if (!landscape.domain().contains_x(xx)) {
                curve.truncated = true;
                curve.exit_time = tt;
                return curve;
            }
            curve.t.push_back(tt);
            curve.x.push_back(xx);
        }
        t = t_next;
        x = *two;
        const double grow = err > 0.0 ? 0.9 * std::sqrt(options.tol * h / err) : 4.0;
        h = std::min(h_max, h * std::clamp(grow, 0.2, 4.0));
    }
    return curve;
}

SampledCurve solve_generalized_flow(const EnergyLandscape& landscape, double alpha, double beta,
                                    double x0, double T, double tol) {
    FlowOptions opts;
    opts.tol = tol;
    return solve_dissipative_flow(landscape, DissipationFamily::cosh(alpha, beta), x0, T, opts);
}

SampledCurve solve_quadratic_flow(const EnergyLandscape& landscape, double omega, double x0,
                                  double T, double tol) {
    FlowOptions opts;
    opts.tol = tol;
    opts.stiffness_cap = 0.0;
    return solve_dissipative_flow(landscape, DissipationFamily::quadratic_limit(omega), x0, T, opts);
}

namespace {

class RateIndependentStepper {
public:
    RateIndependentStepper(const EnergyLandscape& landscape, double A)
        : landscape_(landscape), A_(A),
          probe_max_((landscape.domain().x_max - landscape.domain().x_min) / 4096.0) {}

    double excess(double x, double t) const { return std::abs(landscape_.gradient(x, t)) - A_; }

    /// Stick or slide from x at time t: the nearest point in the descent
    /// direction with |dE/dx| = A, reached while |dE/dx| decreases. Empty if
    /// |dE/dx| grows first (unstable state).
    std::optional<double> settle(double x, double t) const {
        const double phi0 = excess(x, t);
        if (phi0 <= 0.0) return x;
        const double d = landscape_.gradient(x, t) > 0.0 ? -1.0 : 1.0;
        double s_prev = 0.0;
        double phi_prev = phi0;
        double s = std::min(1e-9 * probe_max_ * 4096.0, probe_max_);
        for (;;) {
            const double y = x + d * s;
            if (!landscape_.domain().contains_x(y)) return std::nullopt;
            const double phi = excess(y, t);
            if (phi <= 0.0) {
                const auto f = [&](double r) { return excess(x + d * r, t); };
                return x + d * bisect(f, s_prev, s, 1e-15 * std::max(1.0, std::abs(x)));
            }
            if (phi >= phi_prev) return std::nullopt;
            s_prev = s;
            phi_prev = phi;
            s = std::min(2.0 * s, s + probe_max_);
        }
    }

    /// Fast flow at frozen t: unit-speed descent from x until |dE/dx| <= A.
    double land(double x, double t) const {
        const double d = landscape_.gradient(x, t) > 0.0 ? -1.0 : 1.0;
        double s_prev = 0.0;
        for (double s = probe_max_;; s += probe_max_) {
            const double y = x + d * s;
            if (!landscape_.domain().contains_x(y)) {
                fail(ErrorCode::runaway_jump, "jump transient left the domain at t = " + std::to_string(t));
            }
            if (excess(y, t) <= 0.0) {
                const auto f = [&](double r) { return excess(x + d * r, t); };
                return x + d * bisect(f, s_prev, s, 1e-15 * std::max(1.0, std::abs(x)));
            }
            s_prev = s;
        }
    }

private:
    const EnergyLandscape& landscape_;
    double A_;
    double probe_max_;
};

}  // namespace

BVCurve solve_rate_independent(const EnergyLandscape& landscape, double A, double x0, double T,
                               double dt_load) {
    require(A >= 0.0, "rate-independent solver: A must be nonnegative");
    require(T > 0.0 && T <= landscape.domain().T, "rate-independent horizon outside the domain");
    require(landscape.domain().contains(x0, 0.0), "rate-independent start outside the domain");
    require(std::abs(landscape.gradient(x0, 0.0)) <= A * (1.0 + 1e-12) + 1e-14,
            "rate-independent start outside the stable set |dE/dx| <= A");
    if (dt_load <= 0.0) dt_load = T / 2048.0;
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt_load - 1e-9));
    const RateIndependentStepper stepper(landscape, A);

    BVCurve curve;
    curve.t.push_back(0.0);
    curve.x.push_back(x0);
    double x = x0;
    double t = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_next = k == steps ? T : T * static_cast<double>(k) / static_cast<double>(steps);
        bool jumped_at_end = false;
        for (;;) {
            if (const auto y = stepper.settle(x, t_next)) {
                x = *y;
                break;
            }
            // Unstable before t_next: bisect for the last time a slide exists.
            double lo = t;
            double hi = t_next;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (stepper.settle(x, mid) ? lo : hi) = mid;
            }
            const auto left = stepper.settle(x, lo);
            if (!left) fail(ErrorCode::nonconvergent, "rate-independent solver lost the stable branch");
            Jump j;
            j.index = curve.t.size();
            j.time = hi;
            j.x_left = *left;
            j.x_plateau = *left;
            j.x_right = stepper.land(*left, hi);
            curve.t.push_back(hi);
            curve.x.push_back(j.x_left);
            curve.jumps.push_back(j);
            x = j.x_right;
            t = hi;
            if (hi == t_next) {
                jumped_at_end = true;
                break;
            }
        }
        if (!jumped_at_end) {
            curve.t.push_back(t_next);
            curve.x.push_back(x);
        }
        t = t_next;
    }
    return curve;
}

}  // namespace ldgf
