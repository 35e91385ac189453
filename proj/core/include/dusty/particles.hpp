#pragma once

#include <cstddef>
#include <vector>

namespace dusty {

/// One SPH phase: the gas, or a single dust fraction. All model particles of
/// a phase carry the same mass. Arrays are index-aligned; ghost (boundary)
/// particles, if any, occupy indices [n_active, size()) and are never moved
/// or updated, only read as sources in summations.
struct ParticleSet {
    /// -1 for gas, otherwise the 0-based dust fraction index.
    int fraction = -1;
    double mass = 0.0;

    std::vector<double> x;    // positions
    std::vector<double> v;    // velocities
    std::vector<double> rho;  // densities (mass/length in 1D)

    // Gas only.
    std::vector<double> e;      // specific internal energy
    std::vector<double> p;      // pressure
    std::vector<double> sound;  // sound speed (c_s in isothermal mode)

    // Dust only: per-particle stopping time (refreshed each step in Epstein mode).
    std::vector<double> t_stop;

    std::size_t n_active = 0;

    /// Particle indices sorted by position; rebuilt after positions change.
    std::vector<int> order;

    bool is_gas() const { return fraction < 0; }
    std::size_t size() const { return x.size(); }

    void resize(std::size_t n);
    void sort_by_position();
};

} // namespace dusty
