#pragma once

#include "dusty/cells.hpp"
#include "dusty/config.hpp"
#include "dusty/particles.hpp"

#include <span>
#include <vector>

namespace dusty {

/// Cell-averaged velocities at the next time level. Dust entries are
/// flattened as [cell * n_fractions + i]; cells without gas keep their old
/// dust averages (no drag there).
struct CellDragSolution {
    std::vector<double> v_new;
    std::vector<double> u_new;
};

/// Implicit solve for the cell-averaged velocities, one independent linear
/// system per cell. Works in barycentric/relative variables so that stiff
/// stopping times never form the small difference of two large numbers, and
/// applies the closed-form structured inverse: O(N^2) per cell for N dust
/// fractions. Infinite stopping times reduce exactly to the drag-free
/// update.
CellDragSolution solve_cell_velocities(const CellGrid& grid, double tau);

/// Closed-form inverse of the drag matrix
///   B = I + diag(b) restricted to ones elsewhere, i.e. B_ij = 1 + b_i
///   on the diagonal and 1 off it,
/// returned row-major. Diagnostic; requires every b_i > 0.
std::vector<double> invert_drag_matrix(std::span<const double> b);

/// Epstein-regime stopping time t = s rho_s / (sqrt(p/rho_g) rho_g).
double epstein_stopping_time(double grain_size, double grain_density,
                             double gas_pressure, double gas_density);

/// Per-particle implicit velocity update against the already-solved cell
/// velocities. Active gas and dust only; dust in cells without gas coasts
/// under its external acceleration.
void update_particle_velocities(const CellGrid& grid, ParticleSet& gas,
                                std::vector<ParticleSet>& dust,
                                const std::vector<double>& gas_accel,
                                const std::vector<double>& dust_accel,
                                const CellDragSolution& sol, double tau);

/// Explicit Monaghan-Kocharyan step for one dust fraction: pairwise
/// kernel-weighted drag between gas and dust particles plus the usual
/// pressure/viscosity forces on gas. Globally momentum-conserving to
/// round-off. Requires Epstein drag (the pair coefficient needs the grain
/// size) and exactly one fraction.
void mk_drag_step(ParticleSet& gas, ParticleSet& dust, const SimConfig& cfg,
                  double tau);

} // namespace dusty
