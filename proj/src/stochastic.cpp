#include "ldgf/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "ldgf/errors.hpp"
#include "ldgf/numerics.hpp"

namespace ldgf {

double JumpPath::end_position() const {
    long k = start_index;
    for (const JumpEvent& e : events) k += e.direction;
    return static_cast<double>(k) / lattice_scale;
}

double JumpPath::position_at(double t) const {
    long k = start_index;
    for (const JumpEvent& e : events) {
        if (e.time > t) break;
        k += e.direction;
    }
    return static_cast<double>(k) / lattice_scale;
}

std::vector<double> JumpPath::sample(const std::vector<double>& times) const {
    std::vector<double> out;
    out.reserve(times.size());
    long k = start_index;
    std::size_t next = 0;
    for (double t : times) {
        while (next < events.size() && events[next].time <= t) k += events[next++].direction;
        out.push_back(static_cast<double>(k) / lattice_scale);
    }
    return out;
}

SampledCurve JumpPath::event_curve() const {
    SampledCurve c;
    c.truncated = truncated;
    c.exit_time = exit_time;
    long k = start_index;
    c.t.push_back(0.0);
    c.x.push_back(start());
    for (const JumpEvent& e : events) {
        k += e.direction;
        c.t.push_back(e.time);
        c.x.push_back(static_cast<double>(k) / lattice_scale);
    }
    const double end = truncated ? exit_time : horizon;
    if (c.t.back() < end) {
        c.t.push_back(end);
        c.x.push_back(static_cast<double>(k) / lattice_scale);
    }
    return c;
}

double sup_distance(const JumpPath& path, const SampledCurve& reference) {
    const double n = path.lattice_scale;
    const double end = path.truncated ? path.exit_time : path.horizon;
    double d = 0.0;
    long k = path.start_index;
    std::size_t next = 0;
    // Reference grid points: X is constant between events.
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double t = reference.t[i];
        if (t > end) break;
        while (next < path.events.size() && path.events[next].time <= t) k += path.events[next++].direction;
        d = std::max(d, std::abs(static_cast<double>(k) / n - reference.x[i]));
    }
    // Both one-sided values at each event.
    k = path.start_index;
    for (const JumpEvent& e : path.events) {
        const double r = reference.value_at(e.time);
        d = std::max(d, std::abs(static_cast<double>(k) / n - r));
        k += e.direction;
        d = std::max(d, std::abs(static_cast<double>(k) / n - r));
    }
    d = std::max(d, std::abs(static_cast<double>(k) / n - reference.value_at(end)));
    return d;
}

JumpPath simulate_jump_process(const EnergyLandscape& landscape, int n, double alpha, double beta,
                               double x0, double T, std::uint64_t seed) {
    require(n >= 1, "simulate_jump_process: n must be positive");
    require(alpha > 0.0 && beta > 0.0, "simulate_jump_process: alpha and beta must be positive");
    require(T > 0.0 && T <= landscape.domain().T, "simulate_jump_process: horizon outside the domain");
    const double k_real = x0 * n;
    const double k_round = std::round(k_real);
    require(std::abs(k_real - k_round) <= 1e-9 * std::max(1.0, std::abs(k_real)),
            "simulate_jump_process: x0 is not on the lattice");
    require(landscape.domain().contains(x0, 0.0), "simulate_jump_process: x0 outside the domain");

    const double log_alpha = std::log(alpha);
    const double log_bound = std::log(2.0 * n) + log_alpha + beta * landscape.grad_bound();
    require(log_bound < 700.0, "simulate_jump_process: dominating rate overflows");
    const double bound = std::exp(log_bound);

    JumpPath path;
    path.lattice_scale = n;
    path.start_index = static_cast<long>(k_round);
    path.horizon = T;
    long k = path.start_index;
    Rng rng(seed);
    const double log_n = std::log(static_cast<double>(n));
    double t = 0.0;
    for (;;) {
        t += rng.exponential(bound);
        if (t > T) break;
        ++path.candidates;
        const double x = static_cast<double>(k) / n;
        const double g = beta * landscape.gradient(x, t);
        const double up = std::exp(log_n + log_alpha - g);
        const double down = std::exp(log_n + log_alpha + g);
        const double u = rng.uniform() * bound;
        int dir = 0;
        if (u < up) {
            dir = 1;
        } else if (u < up + down) {
            dir = -1;
        } else {
            continue;
        }
        if (!landscape.domain().contains_x(static_cast<double>(k + dir) / n)) {
            path.truncated = true;
            path.exit_time = t;
            break;
        }
        k += dir;
        path.events.push_back({t, dir});
    }
    return path;
}

SampledCurve SamplePath::curve() const {
    SampledCurve c;
    c.t = t;
    c.x = x;
    c.truncated = truncated;
    c.exit_time = exit_time;
    return c;
}

namespace {

std::size_t step_count(double T, double& dt) {
    require(T > 0.0 && dt > 0.0, "time step and horizon must be positive");
    const auto K = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    dt = T / static_cast<double>(K);
    return K;
}

}  // namespace

SamplePath simulate_sde(const EnergyLandscape& landscape, double omega, double h, double x0,
                        double T, double dt, std::uint64_t seed) {
    require(omega > 0.0 && h >= 0.0, "simulate_sde: need omega > 0 and h >= 0");
    require(T <= landscape.domain().T, "simulate_sde: horizon outside the domain");
    require(landscape.domain().contains(x0, 0.0), "simulate_sde: x0 outside the domain");
    const std::size_t K = step_count(T, dt);
    const double Lx = landscape.grad_space_lipschitz();
    if (Lx > 0.0) {
        require(dt < 1.0 / (2.0 * omega * Lx), "simulate_sde: dt violates the stability bound 1/(2 omega Lx)");
    }
    SamplePath path;
    path.dt = dt;
    path.t.reserve(K + 1);
    path.x.reserve(K + 1);
    path.t.push_back(0.0);
    path.x.push_back(x0);
    Rng rng(seed);
    const double noise = std::sqrt(2.0 * omega * h * dt);
    double x = x0;
    for (std::size_t i = 0; i < K; ++i) {
        const double t = dt * static_cast<double>(i);
        x += -2.0 * omega * landscape.gradient(x, t) * dt + noise * rng.normal();
        const double t_next = i + 1 == K ? T : dt * static_cast<double>(i + 1);
        if (!landscape.domain().contains_x(x)) {
            path.truncated = true;
            path.exit_time = t_next;
            break;
        }
        path.t.push_back(t_next);
        path.x.push_back(x);
    }
    return path;
}

double default_langevin_dt(const WigglyLandscape& wiggly) {
    const double n = wiggly.lattice_scale();
    const double slope = wiggly.max_wiggle_slope();
    require(slope > 0.0, "default Langevin step needs a nonzero wiggle");
    return 0.1 / (n * n * slope * slope);
}

SamplePath simulate_langevin_wiggly(const WigglyLandscape& wiggly, double beta, double x0, double T,
                                    double dt, std::uint64_t seed, std::size_t record_every) {
    require(beta > 0.0, "simulate_langevin_wiggly: beta must be positive");
    require(record_every >= 1, "simulate_langevin_wiggly: record_every must be positive");
    const EnergyLandscape& base = wiggly.base();
    require(T <= base.domain().T, "simulate_langevin_wiggly: horizon outside the domain");
    require(base.domain().contains(x0, 0.0), "simulate_langevin_wiggly: x0 outside the domain");
    if (dt <= 0.0) dt = default_langevin_dt(wiggly);
    const std::size_t K = step_count(T, dt);

    const double n = wiggly.lattice_scale();
    const double ds = n * dt;
    const double noise = std::isinf(beta) ? 0.0 : std::sqrt(2.0 / beta * ds);
    SamplePath path;
    path.dt = dt * static_cast<double>(record_every);
    path.t.push_back(0.0);
    path.x.push_back(x0);
    Rng rng(seed);
    double y = n * x0;
    for (std::size_t i = 0; i < K; ++i) {
        const double t = dt * static_cast<double>(i);
        const double force = base.gradient(y / n, t) + wiggly.wiggle_derivative(y);
        y += -force * ds + (noise > 0.0 ? noise * rng.normal() : 0.0);
        const double t_next = i + 1 == K ? T : dt * static_cast<double>(i + 1);
        if (!base.domain().contains_x(y / n)) {
            path.truncated = true;
            path.exit_time = t_next;
            break;
        }
        if ((i + 1) % record_every == 0 || i + 1 == K) {
            path.t.push_back(t_next);
            path.x.push_back(y / n);
        }
    }
    return path;
}

EscapeRates estimate_escape_rates(const SamplePath& path, const WigglyLandscape& wiggly,
                                  std::size_t min_transitions, double core_radius) {
    require(core_radius > 0.0 && core_radius < 1.0, "escape rates: core radius must lie in (0, 1)");
    const double n = wiggly.lattice_scale();
    // Well k has its minimum at y = 2k + 1.
    auto well_of = [](double y) { return static_cast<long>(std::floor(0.5 * y)); };
    auto in_core = [&](double y, long k) { return std::abs(y - (2.0 * k + 1.0)) <= core_radius; };

    EscapeRates rates;
    std::optional<long> current;
    double start = 0.0;
    for (std::size_t i = 0; i < path.x.size(); ++i) {
        const double y = n * path.x[i];
        const long k = well_of(y);
        if (!current) {
            if (in_core(y, k)) {
                current = k;
                start = path.t[i];
            }
            continue;
        }
        if (k != *current && in_core(y, k)) {
            if (k > *current) {
                rates.transitions_right += static_cast<std::size_t>(k - *current);
            } else {
                rates.transitions_left += static_cast<std::size_t>(*current - k);
            }
            current = k;
        }
    }
    const std::size_t total = rates.transitions_left + rates.transitions_right;
    if (!current || total < min_transitions) {
        fail(ErrorCode::too_few_transitions,
             "escape rates: " + std::to_string(total) + " transitions observed, need " +
                 std::to_string(min_transitions));
    }
    rates.residence_time = path.t.back() - start;
    rates.rate_left = static_cast<double>(rates.transitions_left) / rates.residence_time;
    rates.rate_right = static_cast<double>(rates.transitions_right) / rates.residence_time;
    return rates;
}

SampledCurve EnsembleStats::mean_curve() const {
    SampledCurve c;
    c.t = grid;
    c.x = mean;
    return c;
}

EnsembleStats run_ensemble(const ReplicaFn& replica, const std::vector<double>& grid,
                           const EnsembleOptions& options) {
    require(options.replicas >= 2, "run_ensemble: need at least two replicas");
    const std::size_t R = options.replicas;
    std::vector<std::optional<ReplicaOutcome>> results(R);
    std::vector<std::string> errors(R);

    unsigned workers = options.workers ? options.workers : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(R)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t r = next++; r < R; r = next++) {
            try {
                results[r] = replica(replica_seed(options.seed, r));
                if (results[r]->values.size() != grid.size()) {
                    results[r].reset();
                    errors[r] = "replica returned values off the ensemble grid";
                }
            } catch (const Error& e) {
                errors[r] = std::string(to_string(e.code())) + ": " + e.what();
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    EnsembleStats stats;
    stats.grid = grid;
    stats.mean.assign(grid.size(), 0.0);
    stats.variance.assign(grid.size(), 0.0);
    std::size_t ok = 0;
    for (std::size_t r = 0; r < R; ++r) {
        if (!results[r]) {
            stats.replica_errors.push_back("replica " + std::to_string(r) + ": " + errors[r]);
            continue;
        }
        ++ok;
        const ReplicaOutcome& o = *results[r];
        for (std::size_t j = 0; j < grid.size(); ++j) stats.mean[j] += o.values[j];
        stats.sup_distance_samples.push_back(o.sup_distance);
        if (o.sup_distance > options.tube_radius) ++stats.tube_exit_count;
        if (o.truncated) ++stats.truncated_count;
    }
    stats.replica_count = ok;
    if (ok == 0) return stats;
    for (double& m : stats.mean) m /= static_cast<double>(ok);
    if (ok >= 2) {
        for (std::size_t r = 0; r < R; ++r) {
            if (!results[r]) continue;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                const double d = results[r]->values[j] - stats.mean[j];
                stats.variance[j] += d * d;
            }
        }
        for (double& v : stats.variance) v /= static_cast<double>(ok - 1);
    }
    return stats;
}

ReplicaFn jump_process_replica(const EnergyLandscape& landscape, int n, double alpha, double beta,
                               double x0, double T, SampledCurve reference, std::vector<double> grid) {
    return [=](std::uint64_t seed) {
        const JumpPath path = simulate_jump_process(landscape, n, alpha, beta, x0, T, seed);
        ReplicaOutcome out;
        out.values = path.sample(grid);
        out.truncated = path.truncated;
        if (path.truncated) {
            out.sup_distance = std::numeric_limits<double>::infinity();
        } else if (reference.size() > 0) {
            out.sup_distance = sup_distance(path, reference);
        }
        return out;
    };
}

ReplicaFn sde_replica(const EnergyLandscape& landscape, double omega, double h, double x0, double T,
                      double dt, SampledCurve reference, std::vector<double> grid) {
    return [=](std::uint64_t seed) {
        const SamplePath path = simulate_sde(landscape, omega, h, x0, T, dt, seed);
        const SampledCurve c = path.curve();
        ReplicaOutcome out;
        out.values.reserve(grid.size());
        for (double t : grid) out.values.push_back(c.value_at(t));
        out.truncated = path.truncated;
        if (path.truncated) {
            out.sup_distance = std::numeric_limits<double>::infinity();
        } else if (reference.size() > 0) {
            out.sup_distance = sup_distance(c, reference);
        }
        return out;
    };
}

}  // namespace ldgf
