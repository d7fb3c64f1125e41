#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ldgf {

/// Closed position window times [0, T].
struct Domain {
    double x_min = -10.0;
    double x_max = 10.0;
    double T = 1.0;

    bool contains_x(double x) const { return x >= x_min && x <= x_max; }
    bool contains(double x, double t) const { return contains_x(x) && t >= 0.0 && t <= T; }
    double max_abs_x() const;
};

/// Declared regularity constants, audited by `validate`.
struct Regularity {
    double grad_bound = 0.0;            ///< R >= sup |dE/dx|
    double grad_time_lipschitz = 0.0;   ///< L: Lipschitz constant of dE/dx in t
    double grad_space_lipschitz = 0.0;  ///< Lx: sup |d2E/dx2|
};

using Field = std::function<double(double, double)>;

/// Smooth driving energy E(x, t) on a bounded domain. Immutable; every
/// evaluation is pure.
class EnergyLandscape {
public:
    struct Functions {
        Field value;
        Field gradient;         ///< dE/dx
        Field time_derivative;  ///< dE/dt
        Field curvature;        ///< d2E/dx2
    };

    EnergyLandscape(std::string id, Domain domain, Functions fns, Regularity reg);

    double value(double x, double t) const { return fns_.value(x, t); }
    double gradient(double x, double t) const { return fns_.gradient(x, t); }
    double time_derivative(double x, double t) const { return fns_.time_derivative(x, t); }
    double curvature(double x, double t) const { return fns_.curvature(x, t); }

    const std::string& id() const { return id_; }
    const Domain& domain() const { return domain_; }
    const Regularity& regularity() const { return reg_; }
    double grad_bound() const { return reg_.grad_bound; }
    double grad_time_lipschitz() const { return reg_.grad_time_lipschitz; }
    double grad_space_lipschitz() const { return reg_.grad_space_lipschitz; }

    /// Same functions with different declared constants (used to build
    /// deliberately mis-declared landscapes in audits).
    EnergyLandscape with_regularity(Regularity reg) const;

private:
    std::string id_;
    Domain domain_;
    Functions fns_;
    Regularity reg_;
};

/// Parameters of a builtin landscape. Scalars by name; `custom` also reads the
/// coefficient arrays `c` and `d`.
struct LandscapeSpec {
    std::string id;
    std::map<std::string, double> params;
    std::map<std::string, std::vector<double>> arrays;

    bool operator==(const LandscapeSpec&) const = default;
};

/// Builtins:
///  - linear_tilt: E = g x + |g| max|x|; params g.
///  - quadratic_loading: E = (x - l(t))^2 / 2 with
///    l(t) = offset + rate t + amplitude sin(2 pi t / period).
///  - double_well_loading: E = a (x^2 - 1)^2 - (force0 + force_rate t) x + c0,
///    c0 chosen so that E >= 0 on the domain.
///  - custom: E = sum_k (c_k + d_k t) x^k with declared grad_bound and
///    grad_time_lipschitz.
/// Every id also reads x_min, x_max, T (defaults -10, 10, 1).
EnergyLandscape make_builtin(const LandscapeSpec& spec);

/// Quadratic loading with an arbitrary smooth loading path. `range` bounds
/// l on [0, T] and `speed` bounds |l'|.
struct Loading {
    std::function<double(double)> value;
    std::function<double(double)> rate;
    double min = 0.0;
    double max = 0.0;
    double speed = 0.0;
};
EnergyLandscape make_quadratic_loading(const Loading& loading, Domain domain);

struct SampleGrid {
    std::vector<double> xs;
    std::vector<double> ts;

    static SampleGrid uniform(const Domain& domain, std::size_t nx, std::size_t nt);
};

struct InvariantCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;  ///< worst sampled quantity (|grad|, difference quotient, or min E)
    double at_x = 0.0;
    double at_t = 0.0;
};

struct ValidationReport {
    std::vector<InvariantCheck> checks;  ///< grad_bound, grad_time_lipschitz, nonnegative
    double empirical_grad_bound = 0.0;
    bool passed() const;
    const InvariantCheck& check(const std::string& name) const;
};

ValidationReport validate(const EnergyLandscape& landscape, const SampleGrid& grid);

/// E(x, t) + e(n x) / n with e(y) = (amplitude / 2)(1 + cos(pi y)).
/// Wells sit at odd y, i.e. at x = (2k + 1) / n, spaced 2 / n apart.
class WigglyLandscape {
public:
    WigglyLandscape(EnergyLandscape base, int lattice_scale, double wiggle_amplitude,
                    double kramers_prefactor = 1.0);

    const EnergyLandscape& base() const { return base_; }
    int lattice_scale() const { return n_; }
    double wiggle_amplitude() const { return amplitude_; }
    double kramers_prefactor() const { return prefactor_; }

    double wiggle(double y) const;
    double wiggle_derivative(double y) const;
    double max_wiggle_slope() const;

    double value(double x, double t) const;
    double gradient(double x, double t) const;

private:
    EnergyLandscape base_;
    int n_;
    double amplitude_;
    double prefactor_;
};

}  // namespace ldgf
