#pragma once

#include "dusty/config.hpp"
#include "dusty/particles.hpp"

#include <vector>

namespace dusty {

/// Density summation rho_a = m * sum_b W(r_a - r_b, h) over same-phase
/// particles, self-contribution included. Ghosts contribute as sources but
/// keep their frozen densities. Requires set.order to be current. A positive
/// wrap_period makes the pair sums periodic with that period (the extended
/// wave domain); 0 disables wrapping.
void compute_density(ParticleSet& set, double h, double wrap_period = 0.0);

/// Pressure and sound speed for active gas particles.
/// Adiabatic: p = rho e (gamma - 1), c = sqrt(gamma p / rho).
/// Isothermal: p = c_s^2 rho, c = c_s (e untouched).
void equation_of_state(ParticleSet& gas, const SimConfig& cfg);

/// Acceleration on each gas particle due to pressure and artificial
/// viscosity (drag excluded), plus the external gas acceleration. Entries
/// for ghost particles are zero. Dust feels no pressure; its non-drag
/// acceleration is just the configured external value.
std::vector<double> gas_acceleration(const ParticleSet& gas, const SimConfig& cfg,
                                     double wrap_period = 0.0);

/// Explicit internal-energy update over one step of length tau: compressive
/// PdV work plus viscous heating, evaluated with current velocities and
/// positions. Frictional drag heating is not included. No-op in isothermal
/// mode. Throws SimulationError if any updated energy is non-positive.
void update_internal_energy(ParticleSet& gas, const SimConfig& cfg, double tau,
                            double wrap_period = 0.0);

} // namespace dusty
