#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dusty {

enum class EosMode { isothermal, adiabatic };
enum class DragMode { fixed_stopping_time, epstein };
enum class BoundaryMode { periodic_extended, fixed_ghost };
enum class DragScheme { idic, mk };
enum class Problem { dusty_wave, dusty_shock };

/// Full description of one run. All quantities are in the dimensionless
/// units of the test problems. Immutable after validate(); safe to share
/// read-only across threads.
struct SimConfig {
    double domain_length = 1.0;  // problem interval [0, L)
    double end_time = 1.0;
    double timestep = 0.0;          // constant tau
    double smoothing_length = 0.0;  // constant h
    double cell_size = 0.0;         // h_cell; 0 means "use default 0.5 h"
    double cfl = 0.5;

    EosMode eos = EosMode::isothermal;
    double gamma = 1.4;
    double sound_speed = 1.0;  // isothermal c_s

    bool viscosity = false;
    double visc_alpha = 1.0;
    double visc_beta = 2.0;
    double visc_limiter = 0.0;  // nu; 0 means "use default 0.1 h"

    int n_fractions = 0;
    DragMode drag_mode = DragMode::fixed_stopping_time;
    std::vector<double> stopping_times;  // fixed-stopping-time mode, one per fraction
    std::vector<double> grain_sizes;     // Epstein mode, one per fraction
    double grain_density = 1.0;          // rho_s
    std::vector<double> epsilon;         // dust-to-gas mass ratios, one per fraction

    int n_sph = 0;  // model particles per phase on [0, L)
    BoundaryMode boundary = BoundaryMode::periodic_extended;
    DragScheme scheme = DragScheme::idic;

    // External accelerations; plumbed through but zero in all published runs.
    double external_accel_gas = 0.0;
    std::vector<double> external_accel_dust;

    /// Applies defaults (cell_size, visc_limiter, external accelerations) and
    /// throws ConfigError on any violated invariant.
    void validate();
};

/// A published run: name, problem type, and the exact configuration.
struct RunPreset {
    std::string name;
    Problem problem = Problem::dusty_wave;
    SimConfig config;
};

/// Standard initial-condition parameters shared by all wave runs.
struct WaveInit {
    double amplitude = 1e-4;
    double wave_count = 1.0;  // perturbation ~ cos(2 pi k x) on [0, 1)
    double rho_gas = 1.0;     // background gas density
};

/// Standard shock-tube states (gas density, pressure, internal energy).
struct ShockInit {
    double rho_left = 1.0, p_left = 1.0, e_left = 2.5;
    double rho_right = 0.125, p_right = 0.1, e_right = 2.0;
    double diaphragm = 0.5;  // position of the initial discontinuity
};

WaveInit wave_init();
ShockInit shock_init();

/// Returns the configuration of one of the published runs
/// (DW1-DW3, DS1-DS9). Throws ConfigError for unknown names.
RunPreset preset(const std::string& name);

/// Names of all published runs, in table order.
std::vector<std::string> preset_names();

/// Parses a key = value document (blank lines, '#' comments and [section]
/// headers are skipped), validates, and returns the configuration.
SimConfig load_config(std::istream& in);
SimConfig load_config_string(const std::string& text);
SimConfig load_config_file(const std::string& path);

/// Writes cfg as a document load_config() accepts, field for field.
std::string serialize_config(const SimConfig& cfg);

} // namespace dusty
