#include "ldgf/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "ldgf/errors.hpp"

namespace ldgf {

namespace {

double param(const LandscapeSpec& spec, const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        fail(ErrorCode::invalid_argument, "landscape '" + spec.id + "' needs parameter '" + key + "'");
    }
    return it->second;
}

double param_or(const LandscapeSpec& spec, const std::string& key, double fallback) {
    const auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

Domain read_domain(const LandscapeSpec& spec) {
    Domain d;
    d.x_min = param_or(spec, "x_min", d.x_min);
    d.x_max = param_or(spec, "x_max", d.x_max);
    d.T = param_or(spec, "T", d.T);
    if (!std::isfinite(d.x_min) || !std::isfinite(d.x_max) || !std::isfinite(d.T)) {
        fail(ErrorCode::invalid_argument, "landscape domain must be bounded");
    }
    require(d.x_min < d.x_max, "landscape domain needs x_min < x_max");
    require(d.T > 0.0, "landscape horizon T must be positive");
    return d;
}

EnergyLandscape linear_tilt(const LandscapeSpec& spec) {
    const Domain d = read_domain(spec);
    const double g = param(spec, "g");
    require(std::isfinite(g), "linear_tilt: g must be finite");
    const double shift = std::abs(g) * d.max_abs_x();
    EnergyLandscape::Functions f{
        [g, shift](double x, double) { return g * x + shift; },
        [g](double, double) { return g; },
        [](double, double) { return 0.0; },
        [](double, double) { return 0.0; },
    };
    return EnergyLandscape("linear_tilt", d, std::move(f), {std::abs(g), 0.0, 0.0});
}

// Extremes of offset + rate t + amp sin(k t) on [0, T]: endpoints plus the
// stationary points cos(k t) = -rate / (amp k).
std::pair<double, double> loading_range(double offset, double rate, double amp, double k,
                                        double T) {
    auto ell = [=](double t) { return offset + rate * t + amp * std::sin(k * t); };
    double lo = std::min(ell(0.0), ell(T));
    double hi = std::max(ell(0.0), ell(T));
    if (amp != 0.0) {
        const double c = -rate / (amp * k);
        if (std::abs(c) <= 1.0) {
            const double base = std::acos(c);
            const double period = 2.0 * std::numbers::pi;
            const auto turns = static_cast<long>(std::ceil(k * T / period)) + 1;
            for (long m = -1; m <= turns; ++m) {
                for (double theta : {base + period * m, -base + period * m}) {
                    const double t = theta / k;
                    if (t < 0.0 || t > T) continue;
                    lo = std::min(lo, ell(t));
                    hi = std::max(hi, ell(t));
                }
            }
        }
    }
    return {lo, hi};
}

EnergyLandscape quadratic_loading(const LandscapeSpec& spec) {
    const Domain d = read_domain(spec);
    const double offset = param_or(spec, "offset", 0.0);
    const double rate = param_or(spec, "rate", 1.0);
    const double amp = param_or(spec, "amplitude", 0.0);
    const double period = param_or(spec, "period", 1.0);
    require(period > 0.0, "quadratic_loading: period must be positive");
    const double k = 2.0 * std::numbers::pi / period;
    const auto [lo, hi] = loading_range(offset, rate, amp, k, d.T);
    Loading l{
        [=](double t) { return offset + rate * t + amp * std::sin(k * t); },
        [=](double t) { return rate + amp * k * std::cos(k * t); },
        lo,
        hi,
        std::abs(rate) + std::abs(amp) * k,
    };
    return make_quadratic_loading(l, d);
}

EnergyLandscape double_well_loading(const LandscapeSpec& spec) {
    const Domain d = read_domain(spec);
    const double a = param_or(spec, "a", 1.0);
    const double f0 = param_or(spec, "force0", 0.0);
    const double fr = param_or(spec, "force_rate", 0.0);
    require(a > 0.0, "double_well_loading: a must be positive");
    const double f_max = std::max(std::abs(f0), std::abs(f0 + fr * d.T));
    const double xm = d.max_abs_x();

    // max |4 a x (x^2 - 1)| over the window: endpoints and x = +-1/sqrt(3).
    auto well_grad = [a](double x) { return 4.0 * a * x * (x * x - 1.0); };
    double g_max = std::max(std::abs(well_grad(d.x_min)), std::abs(well_grad(d.x_max)));
    const double crit = 1.0 / std::sqrt(3.0);
    for (double c : {-crit, crit}) {
        if (d.contains_x(c)) g_max = std::max(g_max, std::abs(well_grad(c)));
    }
    const double curv_max = std::max(4.0 * a, std::abs(12.0 * a * xm * xm - 4.0 * a));
    const double c0 = f_max * xm;

    EnergyLandscape::Functions f{
        [=](double x, double t) {
            const double q = x * x - 1.0;
            return a * q * q - (f0 + fr * t) * x + c0;
        },
        [=](double x, double t) { return 4.0 * a * x * (x * x - 1.0) - (f0 + fr * t); },
        [=](double x, double) { return -fr * x; },
        [=](double x, double) { return 12.0 * a * x * x - 4.0 * a; },
    };
    return EnergyLandscape("double_well_loading", d, std::move(f),
                           {g_max + f_max, std::abs(fr), curv_max});
}

EnergyLandscape custom(const LandscapeSpec& spec) {
    const Domain d = read_domain(spec);
    const auto c_it = spec.arrays.find("c");
    require(c_it != spec.arrays.end() && !c_it->second.empty(), "custom landscape needs coefficients 'c'");
    std::vector<double> c = c_it->second;
    std::vector<double> dd;
    if (const auto it = spec.arrays.find("d"); it != spec.arrays.end()) dd = it->second;
    dd.resize(std::max(dd.size(), c.size()), 0.0);
    c.resize(dd.size(), 0.0);
    for (double v : c) require(std::isfinite(v), "custom landscape: non-finite coefficient");
    for (double v : dd) require(std::isfinite(v), "custom landscape: non-finite coefficient");

    // Horner evaluation of sum_k p_k x^k and its first two derivatives.
    auto poly = [](const std::vector<double>& p, double x, int deriv) {
        double acc = 0.0;
        for (std::size_t k = p.size(); k-- > static_cast<std::size_t>(deriv);) {
            double coef = p[k];
            for (int j = 0; j < deriv; ++j) coef *= static_cast<double>(k - j);
            acc = acc * x + coef;
        }
        return acc;
    };
    auto coeffs_at = [c, dd](double t) {
        std::vector<double> p(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) p[k] = c[k] + dd[k] * t;
        return p;
    };

    Regularity reg{param(spec, "grad_bound"), param(spec, "grad_time_lipschitz"), 0.0};
    require(reg.grad_bound >= 0.0 && reg.grad_time_lipschitz >= 0.0,
            "custom landscape: regularity constants must be nonnegative");
    // Lx from a sup of |p''| over endpoints is not safe for general polynomials,
    // so take the coarse bound sum k (k-1) |coef| xm^(k-2).
    const double xm = d.max_abs_x();
    for (std::size_t k = 2; k < c.size(); ++k) {
        const double coef = std::max(std::abs(c[k]), std::abs(c[k] + dd[k] * d.T));
        reg.grad_space_lipschitz += static_cast<double>(k * (k - 1)) * coef *
                                    std::pow(xm, static_cast<double>(k - 2));
    }

    EnergyLandscape::Functions f{
        [=](double x, double t) { return poly(coeffs_at(t), x, 0); },
        [=](double x, double t) { return poly(coeffs_at(t), x, 1); },
        [=](double x, double) { return poly(dd, x, 0); },
        [=](double x, double t) { return poly(coeffs_at(t), x, 2); },
    };
    return EnergyLandscape("custom", d, std::move(f), reg);
}

}  // namespace

double Domain::max_abs_x() const { return std::max(std::abs(x_min), std::abs(x_max)); }

EnergyLandscape::EnergyLandscape(std::string id, Domain domain, Functions fns, Regularity reg)
    : id_(std::move(id)), domain_(domain), fns_(std::move(fns)), reg_(reg) {
    require(fns_.value && fns_.gradient && fns_.time_derivative && fns_.curvature,
            "EnergyLandscape: all four functions are required");
    if (!std::isfinite(reg_.grad_bound)) {
        fail(ErrorCode::invalid_argument, "landscape '" + id_ + "' has unbounded gradient on its domain");
    }
}

EnergyLandscape EnergyLandscape::with_regularity(Regularity reg) const {
    return EnergyLandscape(id_, domain_, fns_, reg);
}

EnergyLandscape make_builtin(const LandscapeSpec& spec) {
    if (spec.id == "linear_tilt") return linear_tilt(spec);
    if (spec.id == "quadratic_loading") return quadratic_loading(spec);
    if (spec.id == "double_well_loading") return double_well_loading(spec);
    if (spec.id == "custom") return custom(spec);
    fail(ErrorCode::invalid_argument, "unknown landscape id '" + spec.id + "'");
}

EnergyLandscape make_quadratic_loading(const Loading& loading, Domain domain) {
    require(loading.value && loading.rate, "quadratic loading needs l and l'");
    require(loading.min <= loading.max, "quadratic loading: empty range");
    auto ell = loading.value;
    auto ell_dot = loading.rate;
    EnergyLandscape::Functions f{
        [ell](double x, double t) {
            const double u = x - ell(t);
            return 0.5 * u * u;
        },
        [ell](double x, double t) { return x - ell(t); },
        [ell, ell_dot](double x, double t) { return -(x - ell(t)) * ell_dot(t); },
        [](double, double) { return 1.0; },
    };
    const double R = std::max(domain.x_max - loading.min, loading.max - domain.x_min);
    return EnergyLandscape("quadratic_loading", domain, std::move(f), {R, loading.speed, 1.0});
}

SampleGrid SampleGrid::uniform(const Domain& domain, std::size_t nx, std::size_t nt) {
    require(nx >= 2 && nt >= 2, "SampleGrid::uniform needs at least two points per axis");
    SampleGrid g;
    for (std::size_t i = 0; i < nx; ++i) {
        g.xs.push_back(domain.x_min + (domain.x_max - domain.x_min) * static_cast<double>(i) /
                                          static_cast<double>(nx - 1));
    }
    for (std::size_t j = 0; j < nt; ++j) {
        g.ts.push_back(domain.T * static_cast<double>(j) / static_cast<double>(nt - 1));
    }
    return g;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

const InvariantCheck& ValidationReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    fail(ErrorCode::invalid_argument, "no invariant named '" + name + "'");
}

ValidationReport validate(const EnergyLandscape& landscape, const SampleGrid& grid) {
    if (grid.xs.empty() || grid.ts.empty()) {
        fail(ErrorCode::invalid_argument, "validate: empty sample grid");
    }
    const Domain& dom = landscape.domain();
    for (double x : grid.xs) require(dom.contains_x(x), "validate: grid position outside the domain");
    for (double t : grid.ts) require(t >= 0.0 && t <= dom.T, "validate: grid time outside the domain");

    // Relative slack for rounding in the analytic formulas.
    constexpr double slack = 1e-12;
    InvariantCheck bound{"grad_bound", true, 0.0, 0.0, 0.0};
    InvariantCheck lip{"grad_time_lipschitz", true, 0.0, 0.0, 0.0};
    InvariantCheck nonneg{"nonnegative", true, std::numeric_limits<double>::infinity(), 0.0, 0.0};

    std::vector<double> ts = grid.ts;
    std::sort(ts.begin(), ts.end());
    for (double x : grid.xs) {
        double prev_g = 0.0;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const double t = ts[j];
            const double g = landscape.gradient(x, t);
            const double e = landscape.value(x, t);
            if (std::abs(g) > bound.worst) bound = {bound.name, true, std::abs(g), x, t};
            if (e < nonneg.worst) nonneg = {nonneg.name, true, e, x, t};
            if (j > 0 && ts[j] > ts[j - 1]) {
                const double q = std::abs(g - prev_g) / (ts[j] - ts[j - 1]);
                if (q > lip.worst) lip = {lip.name, true, q, x, t};
            }
            prev_g = g;
        }
    }
    const Regularity& reg = landscape.regularity();
    bound.passed = bound.worst <= reg.grad_bound * (1.0 + slack) + slack;
    lip.passed = lip.worst <= reg.grad_time_lipschitz * (1.0 + 1e-9) + 1e-9;
    nonneg.passed = nonneg.worst >= -slack;

    ValidationReport report;
    report.empirical_grad_bound = bound.worst;
    report.checks = {bound, lip, nonneg};
    return report;
}

WigglyLandscape::WigglyLandscape(EnergyLandscape base, int lattice_scale, double wiggle_amplitude,
                                 double kramers_prefactor)
    : base_(std::move(base)), n_(lattice_scale), amplitude_(wiggle_amplitude),
      prefactor_(kramers_prefactor) {
    require(n_ >= 1, "WigglyLandscape: lattice scale must be positive");
    require(amplitude_ >= 0.0, "WigglyLandscape: wiggle amplitude must be nonnegative");
    require(prefactor_ > 0.0, "WigglyLandscape: Kramers prefactor must be positive");
}

double WigglyLandscape::wiggle(double y) const {
    return 0.5 * amplitude_ * (1.0 + std::cos(std::numbers::pi * y));
}

double WigglyLandscape::wiggle_derivative(double y) const {
    return -0.5 * amplitude_ * std::numbers::pi * std::sin(std::numbers::pi * y);
}

double WigglyLandscape::max_wiggle_slope() const { return 0.5 * amplitude_ * std::numbers::pi; }

double WigglyLandscape::value(double x, double t) const {
    return base_.value(x, t) + wiggle(n_ * x) / n_;
}

double WigglyLandscape::gradient(double x, double t) const {
    return base_.gradient(x, t) + wiggle_derivative(n_ * x);
}

}  // namespace ldgf
