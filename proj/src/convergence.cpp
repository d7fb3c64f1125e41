#include "ldgf/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "ldgf/errors.hpp"
#include "ldgf/flows.hpp"
#include "ldgf/functionals.hpp"
#include "ldgf/numerics.hpp"

namespace ldgf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double interpolate(const std::vector<double>& s, const std::vector<double>& y, double at) {
    if (at <= s.front()) return y.front();
    if (at >= s.back()) return y.back();
    const auto k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), at) - s.begin()) - 1;
    const double ds = s[k + 1] - s[k];
    return ds > 0.0 ? y[k] + (y[k + 1] - y[k]) * (at - s[k]) / ds : y[k + 1];
}

class Builder {
public:
    Builder(const EnergyLandscape& landscape, double A, std::size_t samples, ParametrizedCurve& out)
        : landscape_(landscape), A_(A), samples_(samples), out_(out) {}

    void start(double t, double x) {
        out_.s.push_back(0.0);
        out_.t.push_back(t);
        out_.x.push_back(x);
    }

    void ac(double t1, double x1) {
        const double t0 = out_.t.back();
        const double x0 = out_.x.back();
        push(out_.s.back() + (t1 - t0) + A_ * std::abs(x1 - x0), t1, x1);
    }

    void jump_leg(double to) {
        const double from = out_.x.back();
        if (from == to) return;
        const double t = out_.t.back();
        for (std::size_t k = 1; k <= samples_; ++k) {
            const double a = out_.x.back();
            const double b = k == samples_ ? to : from + (to - from) * static_cast<double>(k) / samples_;
            push(out_.s.back() + jump_cost_delta(a, b, t, landscape_, A_), t, b);
        }
    }

private:
    void push(double s, double t, double x) {
        out_.s.push_back(s);
        out_.t.push_back(t);
        out_.x.push_back(x);
    }

    const EnergyLandscape& landscape_;
    double A_;
    std::size_t samples_;
    ParametrizedCurve& out_;
};

std::vector<double> window_grid(double T) {
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(0.5 * T + 0.025 * T * i);
    return grid;
}

double default_sde_dt(const EnergyLandscape& landscape, double omega) {
    const double Lx = landscape.regularity().grad_space_lipschitz;
    return Lx > 0.0 ? std::min(1e-3, 0.25 / (omega * Lx)) : 1e-3;
}

}  // namespace

double ParametrizedCurve::t_at(double s_value) const { return interpolate(s, t, s_value); }

double ParametrizedCurve::x_at(double s_value) const { return interpolate(s, x, s_value); }

double ParametrizedCurve::variation() const {
    double v = 0.0;
    for (std::size_t k = 0; k + 1 < x.size(); ++k) v += std::abs(x[k + 1] - x[k]);
    return v;
}

ParametrizedCurve reparametrize(const BVCurve& curve, const EnergyLandscape& landscape, double A,
                                std::size_t jump_samples, double constraint_tol) {
    require(A > 0.0, "reparametrize: A must be positive");
    require(jump_samples >= 1, "reparametrize: jump_samples must be positive");
    curve.check_consistency();
    const double limit = A + constraint_tol * std::max(1.0, A);
    const double T0 = curve.start_time();
    const double T1 = curve.end_time();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        for (double x : {curve.left_limit(i), curve.right_limit(i)}) {
            if (!landscape.domain().contains_x(x)) fail(ErrorCode::domain_exit, "BV curve leaves the domain");
        }
        const bool has_left = i > 0;
        const bool has_right = i + 1 < curve.size();
        if ((has_left && std::abs(landscape.gradient(curve.left_limit(i), curve.t[i])) > limit) ||
            (has_right && std::abs(landscape.gradient(curve.right_limit(i), curve.t[i])) > limit)) {
            fail(ErrorCode::inadmissible_curve,
                 "|dE/dx| exceeds A on an AC piece at t = " + std::to_string(curve.t[i]));
        }
    }

    ParametrizedCurve pc;
    Builder b(landscape, A, jump_samples, pc);
    b.start(T0, curve.left_limit(0));
    pc.anchors.push_back(0);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (i > 0) b.ac(curve.t[i], curve.left_limit(i));
        if (const Jump* j = curve.jump_at(i)) {
            b.jump_leg(j->x_plateau);
            b.jump_leg(j->x_right);
            if (curve.t[i] > T0 && curve.t[i] < T1) pc.anchors.push_back(pc.size() - 1);
        }
    }
    if (pc.anchors.back() != pc.size() - 1) pc.anchors.push_back(pc.size() - 1);
    pc.S = pc.s.back();
    return pc;
}

double parametrized_dissipation(const ParametrizedCurve& pc, const EnergyLandscape& landscape,
                                double A) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pc.size(); ++k) {
        const double dx = std::abs(pc.x[k + 1] - pc.x[k]);
        if (pc.t[k + 1] > pc.t[k]) {
            total += A * dx;
        } else {
            const double g = landscape.gradient(0.5 * (pc.x[k] + pc.x[k + 1]), pc.t[k]);
            total += dx * std::max(A, std::abs(g));
        }
    }
    return total;
}

RecoveryCurve build_recovery_sequence(const ParametrizedCurve& pc, const EnergyLandscape& landscape,
                                      const DissipationFamily& family, double beta) {
    require(pc.size() >= 2 && pc.anchors.size() >= 2, "recovery needs a parametrized curve with two nodes");
    const DissipationFamily f = family.at_beta(beta);
    require(f.tag != FamilyTag::rate_independent, "recovery needs a smooth dissipation family");
    const double floor = f.threshold + f.delta();

    // dt_beta on every s-interval.
    std::vector<double> dtb(pc.size() - 1);
    for (std::size_t k = 0; k + 1 < pc.size(); ++k) {
        const double ds = pc.s[k + 1] - pc.s[k];
        const double dt = pc.t[k + 1] - pc.t[k];
        const double dx = std::abs(pc.x[k + 1] - pc.x[k]);
        const double tm = 0.5 * (pc.t[k] + pc.t[k + 1]);
        const double w = std::abs(landscape.gradient(0.5 * (pc.x[k] + pc.x[k + 1]), tm));
        // eps ds = |dx| / psi*'(max(|w|, A + delta))
        const double eps_ds = dx > 0.0 ? dx * std::exp(-log_psi_star_derivative(f, std::max(w, floor))) : 0.0;
        dtb[k] = std::max(dt, eps_ds);
        if (!(dtb[k] > 0.0) && ds > 0.0) {
            if (dx > 0.0) {
                fail(ErrorCode::nonconvergent, "recovery time step underflows at t = " + std::to_string(pc.t[k]) +
                                                   "; beta is too large for double precision");
            }
            fail(ErrorCode::degenerate_plateau,
                 "recovery time speed vanishes on an s-interval at t = " + std::to_string(pc.t[k]));
        }
    }

    RecoveryCurve out;
    SampledCurve& c = out.curve;
    c.t.push_back(pc.t.front());
    c.x.push_back(pc.x.front());
    double T_beta = 0.0;
    for (std::size_t a = 0; a + 1 < pc.anchors.size(); ++a) {
        const std::size_t lo = pc.anchors[a];
        const std::size_t hi = pc.anchors[a + 1];
        const double t_lo = pc.t[lo];
        const double t_hi = pc.t[hi];
        double seg = 0.0;
        for (std::size_t k = lo; k < hi; ++k) seg += dtb[k];
        if (!(t_hi > t_lo)) fail(ErrorCode::degenerate_plateau, "recovery segment has zero duration");
        T_beta += seg;
        const double lambda = seg / (t_hi - t_lo);
        out.segment_lambda.push_back(lambda);
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            if (pc.s[k + 1] == pc.s[k]) continue;
            acc += dtb[k];
            c.dt.push_back(dtb[k] / lambda);
            c.t.push_back(k + 1 == hi ? t_hi : std::min(t_lo + acc / lambda, t_hi));
            c.x.push_back(pc.x[k + 1]);
        }
    }
    out.lambda = T_beta / (pc.t.back() - pc.t.front());
    return out;
}

void ConvergenceTable::add_row(double parameter, std::vector<double> values, double reference) {
    ConvergenceRow row;
    row.parameter = parameter;
    row.reference = reference;
    row.gap = values.empty() ? kNaN : values.front() - reference;
    row.abs_gap = std::abs(row.gap);
    row.rel_gap = reference != 0.0 ? row.abs_gap / std::abs(reference) : row.abs_gap;
    row.values = std::move(values);
    rows.push_back(std::move(row));
}

std::string ConvergenceTable::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << parameter_name;
    for (const auto& name : value_names) os << ',' << name;
    os << ',' << reference_name << ",gap,abs_gap,rel_gap,flagged\n";
    for (const auto& r : rows) {
        os << r.parameter;
        for (double v : r.values) os << ',' << v;
        os << ',' << r.reference << ',' << r.gap << ',' << r.abs_gap << ',' << r.rel_gap << ','
           << (r.flagged ? 1 : 0) << '\n';
    }
    return os.str();
}

ConvergenceTable mosco_quadratic_experiment(const EnergyLandscape& landscape,
                                            const SampledCurve& curve, double omega,
                                            const std::vector<double>& beta_list) {
    require(omega > 0.0, "mosco_quadratic: omega must be positive");
    require(std::is_sorted(beta_list.rbegin(), beta_list.rend()), "mosco_quadratic: beta_list must decrease");
    ConvergenceTable table{"beta", {"J_beta", "J_Q"}, "J_Q", {}};
    const ExtendedReal jq = action_J_Q(curve, landscape, omega).total;
    for (double beta : beta_list) {
        require(beta > 0.0, "mosco_quadratic: beta must be positive");
        const auto jb = action_J_beta(curve, landscape, DissipationFamily::cosh(omega / beta, beta)).total;
        table.add_row(beta, {jb.value_or(kNaN), jq.value()}, jq.value());
    }
    return table;
}

ConvergenceTable mosco_ri_experiment(const EnergyLandscape& landscape, const BVCurve& curve,
                                     const DissipationFamily& family_template,
                                     const std::vector<double>& beta_list) {
    require(std::is_sorted(beta_list.begin(), beta_list.end()), "mosco_ri: beta_list must increase");
    const double A = family_template.threshold;
    ConvergenceTable table{"beta", {"J_beta", "lambda"}, "J_RI", {}};
    const ExtendedReal jri = action_J_RI(curve, landscape, A).total;
    if (jri.is_infinite()) fail(ErrorCode::inadmissible_curve, "mosco_ri: J_RI of the curve is infinite");
    const ParametrizedCurve pc = reparametrize(curve, landscape, A);
    for (double beta : beta_list) {
        const DissipationFamily f = family_template.at_beta(beta);
        const RecoveryCurve rec = build_recovery_sequence(pc, landscape, f, beta);
        const auto jb = action_J_beta(rec.curve, landscape, f).total;
        table.add_row(beta, {jb.value_or(kNaN), rec.lambda}, jri.value());
        table.rows.back().flagged = jb.is_infinite();
    }
    return table;
}

ConvergenceTable lln_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                double alpha, double beta, double x0, double T,
                                const EnsembleOptions& ensemble) {
    require(std::is_sorted(n_list.begin(), n_list.end()), "lln: n_list must increase");
    const SampledCurve ref = solve_generalized_flow(landscape, alpha, beta, x0, T, 1e-10);
    if (ref.truncated) fail(ErrorCode::domain_exit, "lln: the deterministic limit leaves the domain");
    ConvergenceTable table{"n", {"median_sup_distance", "truncated"}, "zero", {}};
    for (int n : n_list) {
        const auto stats = run_ensemble(jump_process_replica(landscape, n, alpha, beta, x0, T, ref, {T}),
                                        {T}, ensemble);
        table.add_row(n, {median(stats.sup_distance_samples), static_cast<double>(stats.truncated_count)}, 0.0);
        table.rows.back().flagged = stats.truncated_count > 0 || !stats.replica_errors.empty();
    }
    return table;
}

ConvergenceTable bridge_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                   const BridgeOptions& o, const EnsembleOptions& ensemble) {
    require(o.delta >= 0.0 && o.delta <= 1.0, "bridge: delta must lie in [0, 1]");
    require(o.omega > 0.0, "bridge: omega must be positive");
    require(std::is_sorted(n_list.begin(), n_list.end()), "bridge: n_list must increase");
    const std::vector<double> grid = window_grid(o.T);
    const bool diffusive = o.delta == 1.0;

    ConvergenceTable table;
    table.parameter_name = "n";
    double y_var = 0.0;
    double y_mean = 0.0;
    SampledCurve limit;
    if (diffusive) {
        require(o.h_target > 0.0, "bridge: h_target must be positive");
        const double dt = o.sde_dt > 0.0 ? o.sde_dt : default_sde_dt(landscape, o.omega);
        const auto y = run_ensemble(sde_replica(landscape, o.omega, o.h_target, o.x0, o.T, dt, {}, grid),
                                    grid, ensemble);
        y_var = mean(y.variance);
        y_mean = y.mean.back();
        table.value_names = {"var_window_X", "mean_T_X", "var_T_X", "mean_T_Y"};
        table.reference_name = "var_window_Y";
    } else {
        // delta = 0 keeps beta = 1, so the limit is the generalized flow with alpha = omega.
        limit = o.delta == 0.0 ? solve_generalized_flow(landscape, o.omega, 1.0, o.x0, o.T, 1e-10)
                               : solve_quadratic_flow(landscape, o.omega, o.x0, o.T, 1e-10);
        table.value_names = {"mean_T_X", "var_T_X", "var_window_X"};
        table.reference_name = "limit_T";
    }
    for (int n : n_list) {
        require(n > 0, "bridge: n must be positive");
        const double beta = diffusive ? 1.0 / (o.h_target * n) : std::pow(static_cast<double>(n), -o.delta);
        const double alpha = o.omega / beta;
        const auto x = run_ensemble(jump_process_replica(landscape, n, alpha, beta, o.x0, o.T, {}, grid),
                                    grid, ensemble);
        const double var_window = mean(x.variance);
        if (diffusive) {
            table.add_row(n, {var_window, x.mean.back(), x.variance.back(), y_mean}, y_var);
        } else {
            table.add_row(n, {x.mean.back(), x.variance.back(), var_window}, limit.x.back());
        }
        table.rows.back().flagged = x.truncated_count > 0 || !x.replica_errors.empty();
    }
    return table;
}

ConvergenceTable ldp_tube_experiment(const EnergyLandscape& landscape, const std::vector<int>& n_list,
                                     double alpha, double beta, const SampledCurve& reference,
                                     double tube_radius, double x0, const EnsembleOptions& ensemble) {
    require(tube_radius > 0.0, "ldp: tube radius must be positive");
    require(reference.size() >= 2, "ldp: reference needs two samples");
    require(std::is_sorted(n_list.begin(), n_list.end()), "ldp: n_list must increase");
    const double T = reference.end_time();

    double bound = std::numeric_limits<double>::infinity();
    for (double shift : {0.0, -tube_radius, tube_radius}) {
        SampledCurve edge = reference;
        for (double& v : edge.x) v += shift;
        try {
            bound = std::min(bound, action_J_alpha_beta(edge, landscape, alpha, beta).total.value_or(bound));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::domain_exit) throw;
        }
    }
    if (!std::isfinite(bound)) fail(ErrorCode::domain_exit, "ldp: no tube curve lies inside the domain");

    ConvergenceTable table{"n", {"rate", "p_hat", "stays", "replicas"}, "action_bound", {}};
    EnsembleOptions opts = ensemble;
    opts.tube_radius = tube_radius;
    for (int n : n_list) {
        const auto stats = run_ensemble(jump_process_replica(landscape, n, alpha, beta, x0, T, reference, {T}),
                                        {T}, opts);
        const auto total = static_cast<double>(stats.replica_count);
        const double stays = total - static_cast<double>(stats.tube_exit_count);
        const double p = total > 0.0 ? stays / total : 0.0;
        const double rate = stays > 0.0 ? -std::log(p) / n : kNaN;
        table.add_row(n, {rate, p, stays, total}, bound);
        auto& row = table.rows.back();
        if (stays < 5.0) {
            row.flagged = true;
            row.note = stays == 0.0 ? "no stays observed" : "low statistics";
        }
    }
    return table;
}

}  // namespace ldgf
