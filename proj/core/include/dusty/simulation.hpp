#pragma once

#include "dusty/cells.hpp"
#include "dusty/config.hpp"
#include "dusty/particles.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace dusty {

/// Everything one run owns. A state is self-contained: densities, pressures
/// and sound speeds are always consistent with the current positions.
struct SimulationState {
    SimConfig config;
    Problem problem = Problem::dusty_wave;

    double time = 0.0;
    long step_index = 0;

    ParticleSet gas;
    std::vector<ParticleSet> dust;
    CellLayout grid;  // motionless; fixed at setup

    /// Period of the pair sums for the extended wave domain; 0 for shock
    /// runs (ghost particles close the kernel support there instead).
    double wrap_period = 0.0;

    // Per-run diagnostics.
    bool audit_momentum = false;
    double max_momentum_imbalance = 0.0;  // max relative per-cell drift so far
    double min_courant_limit = 0.0;
    bool courant_exceeded = false;
};

/// Maximum admissible time step h CFL / max(c, |v|, |u_i|) for the current
/// state. Recorded, never used to adapt (the schemes run at constant tau).
double courant_limit(const SimulationState& state);

/// One full time step: non-drag forces, energy update, drag (cell-implicit
/// or Monaghan-Kocharyan), positions, density summation, equation of state.
/// Ghost particles act as sources only. Errors from sub-operations propagate.
void step(SimulationState& state);

/// Interpolated (Shepard-normalized) phase fields at a fixed position.
struct ProbeSample {
    double time = 0.0;
    double rho_g = 0.0, v = 0.0;
    std::vector<double> rho, u;
};
ProbeSample probe_state(const SimulationState& state, double x);

struct RunOptions {
    int snapshots = 10;                   // evenly spaced, plus the initial state
    std::optional<double> probe_x;        // record a time series at this position
    bool audit_momentum = false;          // track per-cell momentum balance
    std::optional<double> end_time;       // override config.end_time (0 = ICs only)
};

struct RunMetrics {
    long steps = 0;
    double wall_seconds_per_step = 0.0;
    double max_momentum_imbalance = 0.0;
    double min_courant_limit = 0.0;
    bool courant_exceeded = false;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<ProbeSample> probe;
};

/// Called at every emitted snapshot (the initial state is index 0).
using SnapshotFn = std::function<void(const SimulationState&, int snapshot_index)>;

/// Steps the state until t >= T, invoking the snapshot callback at the
/// configured cadence. The state argument is advanced in place.
RunResult run(SimulationState& state, const RunOptions& options,
              const SnapshotFn& on_snapshot = {});

} // namespace dusty
