#pragma once

#include "dusty/config.hpp"
#include "dusty/simulation.hpp"
#include "dusty/wave.hpp"

#include <functional>
#include <vector>

namespace dusty {

using DensityProfile = std::function<double(double)>;

/// Equal-mass partition of [a, b): n points starting at a, each consecutive
/// interval holding 1/n of the total mass of rho. Adaptive quadrature plus
/// bisection on the interval length. Throws SimulationError if the
/// quadrature does not converge.
std::vector<double> equal_mass_partition(const DensityProfile& rho, int n,
                                         double a, double b);

/// Partition points shifted right by half of each particle's own mass
/// interval (mass-centered placement; exact midpoints for uniform rho).
std::vector<double> place_particles_for_density(const DensityProfile& rho, int n,
                                                double a, double b);

/// Builds the wave run: particles placed by density on [0, L), copied onto
/// the eight unit intervals of the extended domain, velocities sampled from
/// the oracle's initial perturbation. Throws SimulationError if the oracle
/// was built for different stopping times or dust loadings.
SimulationState setup_dustywave(const RunPreset& preset, const WaveSolution& oracle);

/// Builds the shock-tube run: equal-mass placement of the discontinuous
/// states, zero velocities, and motionless ghost particles extending both
/// uniform states one kernel support beyond the domain.
SimulationState setup_dustyshock(const RunPreset& preset);

/// Dispatch on the preset's problem; builds the wave oracle when needed.
SimulationState setup(const RunPreset& preset);

} // namespace dusty
