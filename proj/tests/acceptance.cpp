// Acceptance checks. Run without arguments for all criteria or with a
// criterion number; prints one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ldgf/convergence.hpp"
#include "ldgf/dissipation.hpp"
#include "ldgf/flows.hpp"
#include "ldgf/functionals.hpp"
#include "ldgf/numerics.hpp"
#include "ldgf/stochastic.hpp"

using namespace ldgf;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

EnergyLandscape loading(double x_lim = 2.0) {
    return make_builtin({"quadratic_loading", {{"rate", 1.0}, {"x_min", -x_lim}, {"x_max", x_lim}, {"T", 1}}, {}});
}

EnergyLandscape play_loading() {
    return make_builtin({"quadratic_loading",
                         {{"rate", 0.0}, {"amplitude", 1.0}, {"period", 1.0}, {"x_min", -2}, {"x_max", 2}, {"T", 1}}, {}});
}

EnergyLandscape double_well() {
    return make_builtin({"double_well_loading",
                         {{"a", 0.125}, {"force_rate", 0.5}, {"x_min", -2}, {"x_max", 2}, {"T", 1}}, {}});
}

Interval dual_bound(const DissipationFamily& f, double v) {
    const double r = std::abs(psi_derivative(f, v)) + f.threshold + 1.0;
    return {-r, r};
}

Outcome duality() {
    const std::vector<double> betas{0.1, 0.5, 1.0, 5.0, 20.0};
    const std::vector<double> alphas{0.01, 0.1, 1.0, 10.0, 100.0};
    // The viscosity family has no alpha; its second axis is the threshold A.
    const std::vector<double> thresholds{0.01, 0.1, 0.5, 1.0, 2.0};
    double worst = 0.0;
    int evaluations = 0;
    for (int fam = 0; fam < 2; ++fam) {
        for (std::size_t i = 0; i < 5; ++i) {
            for (double beta : betas) {
                const auto f = fam == 0 ? DissipationFamily::cosh(alphas[i], beta)
                                        : DissipationFamily::vanishing_viscosity(beta, thresholds[i]);
                const ScalarFn dual = [&](double w) { return psi_star(f, w).value(); };
                for (int k = 0; k <= 40; ++k) {
                    const double v = -10.0 + 0.5 * k;
                    const double exact = psi(f, v);
                    const double err = std::abs(legendre(dual, v, dual_bound(f, v)) - exact);
                    worst = std::max(worst, err);
                    ++evaluations;
                }
            }
        }
    }
    return {worst <= 1e-8, fmt("%d evaluations, max error %.2e", evaluations, worst)};
}

Outcome lagrangian_identity() {
    const auto E = loading();
    Rng rng(2024);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double x = -2.0 + 4.0 * rng.uniform();
        const double t = rng.uniform();
        const double v = -10.0 + 20.0 * rng.uniform();
        const double alpha = std::exp(std::log(0.1) + std::log(100.0) * rng.uniform());
        const double beta = std::exp(std::log(0.1) + std::log(50.0) * rng.uniform());
        const auto f = DissipationFamily::cosh(alpha, beta);
        const double g = E.gradient(x, t);
        const double lhs = lagrangian(x, v, t, E, alpha, beta);
        const double rhs = beta * (psi(f, v) + psi_star(f, -g).value() + v * g);
        // Error relative to max(1, |L|): L reaches 1e4 on this sample range.
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return {worst <= 1e-10, fmt("10000 samples, max error %.2e", worst)};
}

Outcome zero_set() {
    const auto E = loading();
    const double tol = 1e-8;
    double worst = 0.0;
    for (auto [alpha, beta] : {std::pair{1.0, 1.0}, std::pair{10.0, 0.1}, std::pair{std::exp(-50.0), 50.0}}) {
        const auto c = solve_generalized_flow(E, alpha, beta, 0.0, 1.0, tol);
        worst = std::max(worst, std::abs(action_J_alpha_beta(c, E, alpha, beta).total.value()));
    }
    return {worst <= 10 * tol * 1.0, fmt("max |J| = %.2e (bound %.0e)", worst, 10 * tol)};
}

Outcome lln_trend() {
    EnsembleOptions opts;
    opts.replicas = 200;
    opts.seed = 11;
    const auto table = lln_experiment(loading(), {250, 1000, 4000}, 1.0, 1.0, 0.0, 1.0, opts);
    bool pass = true;
    std::string detail = "median sup distance";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        detail += fmt(" %.4g", table.rows[i].values[0]);
        if (i > 0) {
            const double ratio = table.rows[i].values[0] / table.rows[i - 1].values[0];
            detail += fmt(" (ratio %.3f)", ratio);
            pass = pass && ratio >= 1.0 / 3.0 && ratio <= 2.0 / 3.0;
        }
    }
    return {pass, detail};
}

Outcome quadratic_mosco() {
    const auto E = loading();
    std::vector<double> xs;
    for (int i = 0; i <= 256; ++i) xs.push_back(0.5 * std::sin(3.0 * i / 256.0));
    const auto curve = make_uniform_curve(0.0, 1.0, 256, xs);
    const auto table = mosco_quadratic_experiment(E, curve, 1.0, {1.0, 0.1, 0.01});
    bool pass = true;
    std::string detail = fmt("J_Q = %.6g, gaps", table.rows[0].reference);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        detail += fmt(" %.3e", table.rows[i].abs_gap);
        if (i > 0) pass = pass && table.rows[i].abs_gap < table.rows[i - 1].abs_gap;
    }
    detail += fmt(", final relative %.2e", table.rows.back().rel_gap);
    return {pass && table.rows.back().rel_gap <= 0.01, detail};
}

Outcome bridge_variance() {
    const double T = 4.0, h = 0.01;
    const auto E = make_builtin({"custom", {{"grad_bound", 3.0}, {"grad_time_lipschitz", 0.0}, {"x_min", -3}, {"x_max", 3}, {"T", T}},
                                 {{"c", {0.0, 0.0, 0.5}}}});
    BridgeOptions b;
    b.delta = 1.0;
    b.omega = 1.0;
    b.h_target = h;
    b.T = T;
    EnsembleOptions opts;
    opts.replicas = 500;
    opts.seed = 6;
    const auto row = bridge_experiment(E, {2000}, b, opts).rows.at(0);
    const double target = h / 2;
    const double ex = row.values[0] / target - 1.0;
    const double ey = row.reference / target - 1.0;
    return {std::abs(ex) <= 0.15 && std::abs(ey) <= 0.15,
            fmt("var X^n %.5f, var Y^h %.5f, h/2 %.5f", row.values[0], row.reference, target)};
}

Outcome ri_recovery() {
    bool pass = true;
    std::string detail;
    const char* names[] = {"play", "double well"};
    int k = 0;
    for (const auto& [E, A, x0] : {std::tuple{play_loading(), 0.3, 0.0}, std::tuple{double_well(), 0.1, -1.0}}) {
        const auto c = solve_rate_independent(E, A, x0, 1.0);
        const auto table = mosco_ri_experiment(E, c, DissipationFamily::cosh_threshold(A, 1.0), {100.0, 1000.0});
        detail += fmt("%s%s gaps %.3e %.3e", k ? "; " : "", names[k], table.rows[0].gap, table.rows[1].gap);
        pass = pass && table.rows[0].gap >= -1e-3 && table.rows[1].gap >= -1e-3 && table.rows[1].gap < table.rows[0].gap;
        ++k;
    }
    return {pass, detail};
}

Outcome jump_cost() {
    const auto E = double_well();
    Rng rng(8);
    double worst = 0.0;
    bool lower_bound = true;
    for (int k = 0; k < 20; ++k) {
        const double x0 = -1.5 + 3.0 * rng.uniform();
        const double x1 = -1.5 + 3.0 * rng.uniform();
        const double t = rng.uniform();
        const double A = 0.05 + 0.3 * rng.uniform();
        const double closed = jump_cost_delta(x0, x1, t, E, A);
        const double brute = jump_cost_brute_force(x0, x1, t, E, A).cost;
        worst = std::max(worst, std::abs(closed - brute));
        lower_bound = lower_bound && closed >= A * std::abs(x1 - x0) && brute >= A * std::abs(x1 - x0) * (1 - 1e-12);
    }
    return {worst <= 1e-6 && lower_bound, fmt("20 segments, max difference %.2e, lower bound %s", worst, lower_bound ? "holds" : "violated")};
}

Outcome ri_balance() {
    struct Scenario {
        const char* name;
        EnergyLandscape E;
        double A, x0;
    };
    const std::vector<Scenario> scenarios{
        {"linear loading", make_builtin({"quadratic_loading", {{"rate", 1.0}, {"x_min", -3}, {"x_max", 3}}, {}}), 0.5, 0.0},
        {"periodic loading", make_builtin({"quadratic_loading",
                                           {{"rate", 0.0}, {"amplitude", 1.5}, {"period", 1.0}, {"x_min", -3}, {"x_max", 3}}, {}}),
         0.5, 0.0},
        {"double well", double_well(), 0.1, -1.0},
    };
    bool pass = true;
    std::string detail;
    for (const auto& s : scenarios) {
        const auto c = solve_rate_independent(s.E, s.A, s.x0, 1.0);
        const double J = action_J_RI(c, s.E, s.A).total.value();
        detail += fmt("%s%s %.2e", detail.empty() ? "" : ", ", s.name, J);
        pass = pass && std::abs(J) <= 1e-3;
    }
    return {pass, "J_RI: " + detail};
}

Outcome kramers_slope() {
    const double barrier = 1.0;
    std::vector<double> minus_beta, log_rate;
    std::string detail;
    for (double beta : {4.0, 6.0, 8.0}) {
        // Roughly 400 escapes at every beta.
        const double T = 400.0 * std::exp(beta * barrier);
        const auto base = make_builtin({"linear_tilt", {{"g", 0.0}, {"x_min", -5000}, {"x_max", 5000}, {"T", T}}, {}});
        const WigglyLandscape W(base, 1, barrier);
        const auto path = simulate_langevin_wiggly(W, beta, 1.0, T, 0.0, 100 + static_cast<std::uint64_t>(beta), 5);
        const auto r = estimate_escape_rates(path, W);
        const double rate = 0.5 * (r.rate_left + r.rate_right);
        minus_beta.push_back(-beta);
        log_rate.push_back(std::log(rate));
        detail += fmt("beta %.0f: %zu escapes, rate %.3e; ", beta, r.transitions_left + r.transitions_right, rate);
    }
    const double slope = linear_fit(minus_beta, log_rate).first;
    return {std::abs(slope / barrier - 1.0) <= 0.15, detail + fmt("slope %.4f vs barrier %.1f", slope, barrier)};
}

Outcome ldp_tube() {
    const auto E = loading(3.0);
    const double alpha = 1.0, beta = 1.0, r = 0.3;
    const auto sol = solve_generalized_flow(E, alpha, beta, 0.0, 1.0, 1e-10);
    SampledCurve ref;
    for (int i = 0; i <= 200; ++i) {
        const double t = i / 200.0;
        ref.t.push_back(t);
        ref.x.push_back(sol.value_at(t) + 2.0 * r * t);
    }
    EnsembleOptions opts;
    opts.replicas = 50000;
    opts.seed = 12;
    const auto table = ldp_tube_experiment(E, {20, 40}, alpha, beta, ref, r, 0.0, opts);
    bool within = true;
    std::vector<double> rates;
    std::string detail = fmt("bound %.4f;", table.rows[0].reference);
    for (const auto& row : table.rows) {
        detail += fmt(" n=%g rate %.4f stays %g%s", row.parameter, row.values[0], row.values[2], row.flagged ? " (low statistics)" : "");
        if (row.flagged) continue;
        rates.push_back(row.values[0]);
        const double factor = row.values[0] / row.reference;
        within = within && factor >= 1.0 / 3.0 && factor <= 3.0;
    }
    const bool nondecreasing = std::is_sorted(rates.begin(), rates.end());
    detail += fmt("; nondecreasing %s, factor-3 %s", nondecreasing ? "yes" : "no", within ? "yes" : "no");
    return {nondecreasing && within, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "duality of psi and psi*", 5, duality},
        {2, "Lagrangian identity", 1, lagrangian_identity},
        {3, "zero set of J_alpha_beta", 10, zero_set},
        {4, "LLN trend", 120, lln_trend},
        {5, "quadratic Mosco limit", 5, quadratic_mosco},
        {6, "bridge / OU variance", 180, bridge_variance},
        {7, "RI recovery", 60, ri_recovery},
        {8, "jump cost oracle", 30, jump_cost},
        {9, "RI energy balance", 30, ri_balance},
        {10, "Kramers slope", 1800, kramers_slope},
        {11, "LDP tube trend", 600, ldp_tube},
    };
    int selected = 0;
    if (argc > 1) selected = std::atoi(argv[1]);
    int failures = 0;
    for (const auto& c : criteria) {
        if (selected != 0 && c.id != selected) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds <= c.time_limit;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("%s [%d] %s: %s; %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    seconds, c.time_limit);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
