#pragma once

#include "dusty/config.hpp"

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dusty {

/// Parameters of the linearized sound-wave problem: a single spatial mode of
/// wavenumber kappa on a uniform background at rest.
struct WaveParams {
    double wavenumber = 0.0;   // kappa; perturbations ~ exp(i kappa x)
    double amplitude = 0.0;    // gas density amplitude A
    double sound_speed = 1.0;  // isothermal c_s
    double rho_gas = 1.0;      // background gas density
    std::vector<double> epsilon;  // background dust-to-gas ratios
    std::vector<double> t_stop;   // stopping times, distinct and positive
};

/// Field values of the reference solution at one point (backgrounds included).
struct WaveField {
    double rho_g = 0.0;
    double v = 0.0;
    std::vector<double> rho;
    std::vector<double> u;
};

/// One row of the initial-perturbation table: delta f(x) = A (c1 cos(kappa x)
/// + c2 sin(kappa x)).
struct WaveCoefficient {
    double cos_coeff = 0.0;
    double sin_coeff = 0.0;
};

/// Reference solution of the linearized gas + N dust fraction system for the
/// damped travelling mode. Perturbations evolve as exp(i kappa x - omega t),
/// so Re(omega) > 0 damps and |Im(omega)|/kappa is the phase speed.
struct WaveSolution {
    WaveParams params;

    std::vector<double> real_roots;  // N real positive dispersion roots
    std::complex<double> omega;      // selected complex root, Im(omega) < 0

    // Complex amplitudes, normalized so rho_g_hat = A exactly.
    std::complex<double> rho_g_hat, v_hat;
    std::vector<std::complex<double>> rho_hat, u_hat;

    WaveField at(double x, double time) const;

    // Scalar field accessors (backgrounds included).
    double rho_g_at(double x, double time) const;
    double v_at(double x, double time) const;
    double rho_at(int fraction, double x, double time) const;
    double u_at(int fraction, double x, double time) const;

    /// |amplitude envelope| of the velocity perturbation at time t.
    double velocity_envelope(double time) const;

    /// Initial-perturbation coefficient pairs per unit amplitude, in row
    /// order rho_g, v, rho_1..rho_N, u_1..u_N.
    std::vector<std::pair<std::string, WaveCoefficient>> coefficient_table() const;
};

/// Dispersion function F(omega, omega_s) = omega^2 (1 + sum_j eps_j /
/// (1 - omega t_j)) + omega_s^2. Throws OracleError at a singular point.
std::complex<double> dispersion_F(std::complex<double> omega, double omega_s,
                                  std::span<const double> epsilon,
                                  std::span<const double> t_stop);

/// Coefficients (ascending powers, degree N+2) of the polynomial form of the
/// dispersion relation, F(omega) times prod_j (1 - omega t_j).
std::vector<double> dispersion_poly_coeffs(double omega_s,
                                           std::span<const double> epsilon,
                                           std::span<const double> t_stop);

/// Polynomial form evaluated by Horner's rule.
std::complex<double> dispersion_poly(std::complex<double> omega, double omega_s,
                                     std::span<const double> epsilon,
                                     std::span<const double> t_stop);

/// |F(omega)| relative to the magnitudes of its terms; near zero at a root.
double dispersion_residual(std::complex<double> omega, double omega_s,
                           std::span<const double> epsilon,
                           std::span<const double> t_stop);

/// The N real positive dispersion roots, sorted ascending: one bracketed in
/// each gap between consecutive singular points 1/t_j and one beyond the
/// largest. Bisection to relative tolerance 1e-13 (200-iteration cap).
/// Throws OracleError on degenerate stopping times or bracket failure.
std::vector<double> find_real_roots(std::span<const double> epsilon,
                                    std::span<const double> t_stop,
                                    double omega_s);

/// The remaining conjugate root pair, recovered from the real roots through
/// the sum and product of all roots; returns the member with negative
/// imaginary part. Throws OracleError if the pair is not complex.
std::complex<double> complex_pair(std::span<const double> real_roots,
                                  std::span<const double> epsilon,
                                  std::span<const double> t_stop,
                                  double omega_s);

/// Full oracle: roots, selected mode, and amplitude coefficients.
WaveSolution solve_wave(const WaveParams& params);

/// Wave parameters of a DW preset (unit interval, A = 1e-4, k = 1).
WaveParams wave_params_for(const RunPreset& preset);

} // namespace dusty
