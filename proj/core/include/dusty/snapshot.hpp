#pragma once

#include "dusty/simulation.hpp"

#include <span>
#include <string>
#include <vector>

namespace dusty {

/// One particle row of a snapshot. phase 0 is gas, phase i >= 1 is dust
/// fraction i; fields that do not apply to a phase are written as 0.
struct SnapshotRow {
    int phase = 0;
    double x = 0.0, rho = 0.0, v = 0.0, e = 0.0, p = 0.0, t_stop = 0.0;
};

struct Snapshot {
    double time = 0.0;
    int index = 0;
    std::vector<SnapshotRow> rows;  // sorted by (phase, x)
};

/// Rows of all active particles inside [lo, hi].
Snapshot take_snapshot(const SimulationState& state, double lo, double hi);

/// One CSV file per phase: <dir>/snapshot_<index>_<gas|dust_i>.csv with a
/// '# time=..., preset=..., columns=...' comment line. Deterministic
/// formatting (%.17g); identical runs give byte-identical files.
void write_snapshot_files(const std::string& dir, const std::string& run_name,
                          const Snapshot& snapshot);

void write_probe_csv(const std::string& path, const std::string& run_name,
                     std::span<const ProbeSample> probe);

/// Discrete error norms between matched samples: L1 = mean |d|,
/// L2 = sqrt(mean d^2), Linf = max |d|. Throws SimulationError when empty.
struct FieldErrors {
    double l1 = 0.0, l2 = 0.0, linf = 0.0;
};
FieldErrors error_metrics(std::span<const double> values,
                          std::span<const double> reference);

/// Least-squares slope of log(time) against log(n): the measured complexity
/// exponent of a timing table.
double fit_power_law_exponent(std::span<const double> n,
                              std::span<const double> seconds);

/// Median wall time of one cell drag solve for each fraction count in ns,
/// measured on synthetic randomly-filled cells.
std::vector<double> drag_solve_timing(std::span<const int> fraction_counts,
                                      int cells_per_grid, int repeats);

} // namespace dusty
