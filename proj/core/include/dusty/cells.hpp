#pragma once

#include "dusty/config.hpp"
#include "dusty/particles.hpp"

#include <vector>

namespace dusty {

/// Motionless uniform cell grid: cell k covers [x0 + k w, x0 + (k+1) w).
/// A particle exactly on a cell boundary belongs to the right-hand cell.
struct CellLayout {
    double x0 = 0.0;
    double width = 0.0;
    int n = 0;

    int cell_of(double x) const;
};

/// Per-cell membership and averages used by the cell drag solve.
/// Dust quantities are flattened as [cell * n_fractions + i].
struct CellGrid {
    CellLayout layout;
    int n_fractions = 0;

    std::vector<std::vector<int>> gas_members;               // [cell]
    std::vector<std::vector<std::vector<int>>> dust_members; // [fraction][cell]

    std::vector<double> v_star;       // cell-averaged gas velocity
    std::vector<double> a_gas_star;   // cell-averaged gas acceleration
    std::vector<double> u_star;       // cell-averaged dust velocities
    std::vector<double> t_star;       // cell-averaged stopping times
    std::vector<double> eps_star;     // m_i L_i / (m_g K)
    std::vector<double> a_dust_star;  // cell-averaged dust accelerations

    int gas_count(int cell) const { return static_cast<int>(gas_members[cell].size()); }
    int dust_count(int fraction, int cell) const {
        return static_cast<int>(dust_members[fraction][cell].size());
    }
    std::size_t at(int cell, int fraction) const {
        return static_cast<std::size_t>(cell) * n_fractions + fraction;
    }
};

/// Bins every active particle into exactly one cell (ghosts are frozen and
/// stay out of the drag solve). Member lists are in ascending particle
/// index. Throws EmptyFractionCell if a cell holds gas but lacks some dust
/// fraction, and SimulationError if a particle falls outside the grid.
CellGrid build_cells(const CellLayout& layout, const ParticleSet& gas,
                     const std::vector<ParticleSet>& dust);

/// Refreshes per-particle stopping times. Fixed mode copies the configured
/// values. Epstein mode evaluates t = s rho_s / (c rho) from the cell's mean
/// gas state, with c = sqrt(p/rho) averaged over the cell's gas particles;
/// dust in a cell without gas gets an infinite stopping time and coasts.
void refresh_stopping_times(const CellGrid& grid, const ParticleSet& gas,
                            std::vector<ParticleSet>& dust, const SimConfig& cfg);

/// Populates the cell averages (fixed ascending-index summation order).
/// gas_accel is per gas particle; dust fractions feel only the constant
/// external accelerations.
void average_cells(CellGrid& grid, const ParticleSet& gas,
                   const std::vector<ParticleSet>& dust,
                   const std::vector<double>& gas_accel,
                   const std::vector<double>& dust_accel);

} // namespace dusty
