#pragma once

#include "dusty/config.hpp"

#include <span>
#include <vector>

namespace dusty {

struct FluidState {
    double rho = 0.0, v = 0.0, p = 0.0;
};

struct ShockSample {
    double rho = 0.0, v = 0.0, p = 0.0, e = 0.0;
};

/// Exact solution of the ideal-gas Riemann problem, with every sound speed
/// multiplied by a constant factor. With scale = 1/sqrt(1 + sum eps_i) this
/// is the stiff-limit reference for the dusty shock tube: the mixture moves
/// like a heavier gas while the reported density stays the gas density.
struct ShockReference {
    FluidState left, right;
    double gamma = 1.4;
    double scale = 1.0;

    double p_star = 0.0, v_star = 0.0;
    double rho_star_left = 0.0, rho_star_right = 0.0;

    // Wave speeds: for a rarefaction head/tail bound the fan, for a shock
    // head == tail == the shock speed.
    double left_head = 0.0, left_tail = 0.0;
    double right_head = 0.0, right_tail = 0.0;
    bool left_is_shock = false, right_is_shock = false;

    /// Self-similar profile at xi = (x - x0) / t.
    ShockSample sample(double xi) const;

    /// Profile at position x and time t for a diaphragm at x0; t <= 0 gives
    /// the initial piecewise-constant states.
    ShockSample at(double x, double x0, double t) const;
};

/// Star-region iteration (two-rarefaction initial guess, Newton to 1e-12)
/// plus wave-speed bookkeeping. Throws OracleError on vacuum formation or
/// non-convergence.
ShockReference solve_shock(const FluidState& left, const FluidState& right,
                           double gamma, double scale);

/// Mixture sound speed in the short-stopping-time limit: c / sqrt(1 + sum eps).
double effective_sound_speed(double sound_speed, std::span<const double> epsilon);

/// Shock reference for a DS preset: the standard tube states with the sound
/// speed reduced by the preset's total dust loading.
ShockReference shock_reference_for(const RunPreset& preset);

/// Characteristic speeds of the isothermal gas + N dust system: each dust
/// velocity twice, then v - c_s and v + c_s. All real (hyperbolicity).
std::vector<double> characteristic_speeds(double v, std::span<const double> u,
                                          double sound_speed);

} // namespace dusty
