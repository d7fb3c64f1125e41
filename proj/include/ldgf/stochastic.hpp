#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ldgf/curves.hpp"
#include "ldgf/energy.hpp"

namespace ldgf {

struct JumpEvent {
    double time = 0.0;
    int direction = 0;  ///< +1 or -1
};

/// Trajectory of the lattice chain: piecewise constant, right-continuous,
/// moving by +-1/n at the event times.
struct JumpPath {
    int lattice_scale = 1;
    long start_index = 0;  ///< start = start_index / n
    double horizon = 0.0;
    std::vector<JumpEvent> events;
    bool truncated = false;
    double exit_time = std::numeric_limits<double>::quiet_NaN();
    std::size_t candidates = 0;  ///< proposals drawn by the thinning loop

    double start() const { return static_cast<double>(start_index) / lattice_scale; }
    double end_position() const;
    /// X(t), right-continuous.
    double position_at(double t) const;
    /// Values at the given nondecreasing times.
    std::vector<double> sample(const std::vector<double>& times) const;
    /// Event-time rows plus the two endpoints, for export.
    SampledCurve event_curve() const;
};

/// Exact sup over [0, horizon] of |X(t) - reference(t)|, comparing both
/// one-sided values at each event and the reference's own grid points.
double sup_distance(const JumpPath& path, const SampledCurve& reference);

/// Thinning with dominating rate 2 n alpha exp(beta R). Leaving the domain
/// stops the path with the truncated flag set.
JumpPath simulate_jump_process(const EnergyLandscape& landscape, int n, double alpha, double beta,
                               double x0, double T, std::uint64_t seed);

/// Uniform-grid path of a diffusion.
struct SamplePath {
    double dt = 0.0;
    std::vector<double> t;
    std::vector<double> x;
    bool truncated = false;
    double exit_time = std::numeric_limits<double>::quiet_NaN();

    SampledCurve curve() const;
};

/// Euler-Maruyama for dY = -2 omega dE/dx dt + sqrt(2 omega h) dW. `dt` is
/// shrunk to T / ceil(T / dt) so that the grid ends exactly at T; it must
/// satisfy dt < 1 / (2 omega Lx).
SamplePath simulate_sde(const EnergyLandscape& landscape, double omega, double h, double x0,
                        double T, double dt, std::uint64_t seed);

/// dZ = -(dE/dx + e'(n Z)) dt + sqrt(2 / (beta n)) dW, integrated in the
/// lattice variables y = n x, s = n t. `dt <= 0` selects the default
/// 0.1 / (n^2 max|e'|^2). Output is sampled every `record_every` steps.
SamplePath simulate_langevin_wiggly(const WigglyLandscape& wiggly, double beta, double x0, double T,
                                    double dt, std::uint64_t seed, std::size_t record_every = 1);

double default_langevin_dt(const WigglyLandscape& wiggly);

struct EscapeRates {
    double rate_left = 0.0;
    double rate_right = 0.0;
    std::size_t transitions_left = 0;
    std::size_t transitions_right = 0;
    double residence_time = 0.0;
};

/// Counts well-to-well transitions; a new well is entered once the path comes
/// within `core_radius` (in y = n x units) of its minimum.
EscapeRates estimate_escape_rates(const SamplePath& path, const WigglyLandscape& wiggly,
                                  std::size_t min_transitions = 20, double core_radius = 0.8);

/// One replica of an ensemble: values on the ensemble grid and the sup
/// distance to the reference.
struct ReplicaOutcome {
    std::vector<double> values;
    double sup_distance = 0.0;
    bool truncated = false;
};

using ReplicaFn = std::function<ReplicaOutcome(std::uint64_t seed)>;

struct EnsembleOptions {
    std::size_t replicas = 2;
    double tube_radius = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    unsigned workers = 0;  ///< 0: hardware concurrency
};

struct EnsembleStats {
    std::size_t replica_count = 0;
    std::vector<double> grid;
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<double> sup_distance_samples;
    std::size_t tube_exit_count = 0;
    std::size_t truncated_count = 0;
    std::vector<std::string> replica_errors;  ///< replicas that threw; excluded from the stats

    SampledCurve mean_curve() const;
};

/// Runs replica r with seed `replica_seed(seed, r)` on a pool of threads and
/// reduces in replica order, so results do not depend on the worker count.
EnsembleStats run_ensemble(const ReplicaFn& replica, const std::vector<double>& grid,
                           const EnsembleOptions& options);

ReplicaFn jump_process_replica(const EnergyLandscape& landscape, int n, double alpha, double beta,
                               double x0, double T, SampledCurve reference, std::vector<double> grid);
ReplicaFn sde_replica(const EnergyLandscape& landscape, double omega, double h, double x0, double T,
                      double dt, SampledCurve reference, std::vector<double> grid);

}  // namespace ldgf
