#include "ldgf/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "ldgf/errors.hpp"
#include "ldgf/numerics.hpp"

namespace ldgf {

namespace {

void require_inside(const SampledCurve& curve, const EnergyLandscape& landscape) {
    if (curve.size() < 2) fail(ErrorCode::inadmissible_curve, "action needs at least two samples");
    const Domain& d = landscape.domain();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!d.contains_x(curve.x[i]) || curve.t[i] < 0.0 || curve.t[i] > d.T * (1.0 + 1e-12)) {
            fail(ErrorCode::domain_exit, "curve leaves the domain at t = " + std::to_string(curve.t[i]));
        }
    }
}

struct Midpoint {
    double h;
    double v;
    double x;
    double t;
};

Midpoint midpoint(const SampledCurve& c, std::size_t i) {
    const double h = c.step(i);
    require(h > 0.0, "curve steps must be positive");
    return {h, (c.x[i + 1] - c.x[i]) / h, 0.5 * (c.x[i] + c.x[i + 1]), c.t[i] + 0.5 * h};
}

// Zeros of |g| - A on [a, b] bracketed on a uniform scan.
std::vector<double> kinks(const ScalarFn& excess, double a, double b) {
    constexpr int scan = 256;
    std::vector<double> roots;
    double prev_x = a;
    double prev = excess(a);
    for (int i = 1; i <= scan; ++i) {
        const double x = a + (b - a) * i / scan;
        const double cur = excess(x);
        if ((prev < 0.0) != (cur < 0.0)) {
            roots.push_back(bisect(excess, prev_x, x, 1e-15 * std::max(1.0, std::abs(x))));
        }
        prev_x = x;
        prev = cur;
    }
    return roots;
}

double simpson(const ScalarFn& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += f(a + h * i) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

ActionReport action_J_beta(const SampledCurve& curve, const EnergyLandscape& landscape,
                           const DissipationFamily& family) {
    require(family.tag != FamilyTag::rate_independent, "J_beta needs a smooth dissipation family");
    require_inside(curve, landscape);
    ActionReport r;
    bool infinite = false;
    for (std::size_t i = 0; i < curve.intervals(); ++i) {
        const Midpoint m = midpoint(curve, i);
        const double g = landscape.gradient(m.x, m.t);
        const ExtendedReal dual = psi_star(family, g);
        if (dual.is_infinite()) {
            if (!infinite) r.violation_time = m.t;
            infinite = true;
        } else {
            r.part_psi_star += m.h * dual.value();
        }
        r.part_psi += m.h * psi(family, m.v);
        r.part_work += m.h * m.v * g;
        r.quadrature_step = std::max(r.quadrature_step, m.h);
    }
    r.total = infinite ? ExtendedReal::infinity() : ExtendedReal(r.part_psi + r.part_psi_star + r.part_work);
    return r;
}

ActionReport action_J_alpha_beta(const SampledCurve& curve, const EnergyLandscape& landscape,
                                 double alpha, double beta) {
    ActionReport r = action_J_beta(curve, landscape, DissipationFamily::cosh(alpha, beta));
    r.part_psi *= beta;
    r.part_psi_star *= beta;
    r.part_work *= beta;
    if (r.total.is_finite()) r.total = beta * r.total.value();
    return r;
}

ActionReport action_J_Q(const SampledCurve& curve, const EnergyLandscape& landscape, double omega) {
    require(omega > 0.0, "J_Q: omega must be positive");
    return action_J_beta(curve, landscape, DissipationFamily::quadratic_limit(omega));
}

double energy_identity_residual(const SampledCurve& curve, const EnergyLandscape& landscape,
                                const DissipationFamily& family) {
    require(family.tag != FamilyTag::rate_independent, "energy identity needs a smooth family");
    require_inside(curve, landscape);
    double sum = 0.0;
    for (std::size_t i = 0; i < curve.intervals(); ++i) {
        const Midpoint m = midpoint(curve, i);
        const double g = landscape.gradient(m.x, m.t);
        sum += m.h * (psi(family, m.v) + psi_star(family, g).value() - landscape.time_derivative(m.x, m.t));
    }
    const std::size_t last = curve.size() - 1;
    return sum + landscape.value(curve.x[last], curve.t[last]) - landscape.value(curve.x[0], curve.t[0]);
}

double jump_cost_delta(double x0, double x1, double t, const EnergyLandscape& landscape, double A,
                       JumpCostMode mode) {
    require(A >= 0.0, "jump cost: A must be nonnegative");
    const Domain& d = landscape.domain();
    if (!d.contains_x(x0) || !d.contains_x(x1)) {
        fail(ErrorCode::domain_exit, "jump segment outside the domain");
    }
    if (mode == JumpCostMode::brute_force) return jump_cost_brute_force(x0, x1, t, landscape, A).cost;
    const double a = std::min(x0, x1);
    const double b = std::max(x0, x1);
    if (a == b) return 0.0;
    const ScalarFn weight = [&](double u) { return std::max(std::abs(landscape.gradient(u, t)), A); };
    const ScalarFn excess = [&](double u) { return std::abs(landscape.gradient(u, t)) - A; };
    std::vector<double> cuts{a};
    for (double k : kinks(excess, a, b)) cuts.push_back(k);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += adaptive_gauss(weight, cuts[i], cuts[i + 1], 1e-14);
    }
    // The weight is at least A; keep the bound exact under rounding.
    return std::max(total, A * (b - a));
}

BruteForcePath jump_cost_brute_force(double x0, double x1, double t,
                                     const EnergyLandscape& landscape, double A,
                                     std::size_t grid_points) {
    require(grid_points >= 8, "brute-force jump cost needs a finer grid");
    const Domain& d = landscape.domain();
    BruteForcePath out;
    if (x0 == x1) {
        out.nodes = {x0};
        return out;
    }
    // Uniform grid with x0 and x1 on nodes; margins let the search consider
    // paths that overshoot either end.
    const double len = std::abs(x1 - x0);
    const auto inner = static_cast<long>(std::max<std::size_t>(4, grid_points * 2 / 3));
    const double h = len / static_cast<double>(inner);
    const auto margin = static_cast<long>(inner / 4);
    const double lo_end = std::min(x0, x1);
    long left = margin;
    long right = margin;
    while (left > 0 && lo_end - h * static_cast<double>(left) < d.x_min) --left;
    while (right > 0 && lo_end + len + h * static_cast<double>(right) > d.x_max) --right;
    const long count = left + inner + right + 1;
    auto pos = [&](long i) { return lo_end + h * static_cast<double>(i - left); };
    const long src = x0 < x1 ? left : left + inner;
    const long dst = x0 < x1 ? left + inner : left;

    const ScalarFn weight = [&](double u) { return std::max(std::abs(landscape.gradient(u, t)), A); };
    std::vector<double> edge(static_cast<std::size_t>(count - 1));
    for (long i = 0; i + 1 < count; ++i) edge[i] = simpson(weight, pos(i), pos(i + 1), 64);

    // Dijkstra on the chain graph; each node links to its two neighbours.
    std::vector<double> dist(count, std::numeric_limits<double>::infinity());
    std::vector<long> prev(count, -1);
    using Item = std::pair<double, long>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.push({0.0, src});
    while (!queue.empty()) {
        const auto [du, u] = queue.top();
        queue.pop();
        if (du > dist[u]) continue;
        if (u == dst) break;
        for (long v : {u - 1, u + 1}) {
            if (v < 0 || v >= count) continue;
            const double w = edge[std::min(u, v)];
            if (du + w < dist[v]) {
                dist[v] = du + w;
                prev[v] = u;
                queue.push({dist[v], v});
            }
        }
    }
    out.cost = dist[dst];
    std::vector<long> route;
    for (long v = dst; v != -1; v = prev[v]) route.push_back(v);
    std::reverse(route.begin(), route.end());
    for (std::size_t i = 0; i < route.size(); ++i) {
        out.nodes.push_back(pos(route[i]));
        if (i >= 2 && (route[i] - route[i - 1]) != (route[i - 1] - route[i - 2])) out.monotone = false;
    }
    return out;
}

ActionReport action_J_RI(const BVCurve& curve, const EnergyLandscape& landscape, double A,
                         double constraint_tol) {
    require(A >= 0.0, "J_RI: A must be nonnegative");
    curve.check_consistency();
    const Domain& dom = landscape.domain();
    for (double x : curve.x) {
        if (!dom.contains_x(x)) fail(ErrorCode::domain_exit, "BV curve leaves the domain");
    }
    ActionReport r;
    const double limit = A + constraint_tol * std::max(1.0, A);
    bool violated = false;
    double dEdt = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const double xa = curve.right_limit(i);
        const double xb = curve.left_limit(i + 1);
        const double h = curve.t[i + 1] - curve.t[i];
        r.quadrature_step = std::max(r.quadrature_step, h);
        r.part_var += A * std::abs(xb - xa);
        dEdt += h * landscape.time_derivative(0.5 * (xa + xb), curve.t[i] + 0.5 * h);
        if (!violated) {
            for (const auto& [x, t] : {std::pair{xa, curve.t[i]}, std::pair{xb, curve.t[i + 1]}}) {
                if (std::abs(landscape.gradient(x, t)) > limit) {
                    violated = true;
                    r.violation_time = t;
                    break;
                }
            }
        }
    }
    for (const Jump& j : curve.jumps) {
        r.part_jump += jump_cost_delta(j.x_left, j.x_plateau, j.time, landscape, A) +
                       jump_cost_delta(j.x_plateau, j.x_right, j.time, landscape, A);
    }
    r.part_work = landscape.value(curve.final_value(), curve.end_time()) -
                  landscape.value(curve.initial_value(), curve.start_time()) - dEdt;
    r.total = violated ? ExtendedReal::infinity() : ExtendedReal(r.part_var + r.part_jump + r.part_work);
    return r;
}

Variation variation(const BVCurve& curve) {
    Variation v;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        v.ac += std::abs(curve.left_limit(i + 1) - curve.right_limit(i));
    }
    for (const Jump& j : curve.jumps) {
        v.jump += std::abs(j.x_left - j.x_plateau) + std::abs(j.x_plateau - j.x_right);
    }
    v.total = v.ac + v.jump;
    return v;
}

double variation(const SampledCurve& curve) {
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) v += std::abs(curve.x[i + 1] - curve.x[i]);
    return v;
}

}  // namespace ldgf
