#include "dusty/setup.hpp"

#include "dusty/errors.hpp"
#include "dusty/sph.hpp"

#include <cmath>

namespace dusty {

namespace {

// Adaptive Simpson quadrature; abs_tol is split over subdivisions.
double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const DensityProfile& f, double a, double m, double b,
             double fa, double fm, double fb, double whole, double abs_tol,
             int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double lhs = simpson(a, m, fa, flm, fm);
    const double rhs = simpson(m, b, fm, frm, fb);
    if (std::abs(lhs + rhs - whole) <= 15.0 * abs_tol)
        return lhs + rhs + (lhs + rhs - whole) / 15.0;
    if (depth <= 0)
        throw SimulationError("particle placement quadrature did not converge");
    return adapt(f, a, lm, m, fa, flm, fm, lhs, 0.5 * abs_tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, rhs, 0.5 * abs_tol, depth - 1);
}

double integrate(const DensityProfile& f, double a, double b, double abs_tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adapt(f, a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), abs_tol, 64);
}

} // namespace

std::vector<double> equal_mass_partition(const DensityProfile& rho, int n,
                                         double a, double b) {
    if (n < 1) throw SimulationError("particle placement needs n >= 1");
    const double total = integrate(rho, a, b, 1e-14 * (b - a));
    if (!(total > 0.0)) throw SimulationError("density profile has non-positive mass");
    const double target = total / n;
    const double tol = 1e-14 * total;

    std::vector<double> points;
    points.reserve(n);
    double x = a;
    for (int k = 0; k < n; ++k) {
        points.push_back(x);
        if (k + 1 == n) break;
        // Bisection on the interval length: mass(x, x + dx) = target.
        double lo = 0.0, hi = b - x;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * (b - a); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (integrate(rho, x, x + mid, tol) < target)
                lo = mid;
            else
                hi = mid;
        }
        x += 0.5 * (lo + hi);
    }
    return points;
}

std::vector<double> place_particles_for_density(const DensityProfile& rho, int n,
                                                double a, double b) {
    std::vector<double> points = equal_mass_partition(rho, n, a, b);
    // Shift each particle right by half its own mass interval.
    for (std::size_t k = 0; k + 1 < points.size(); ++k)
        points[k] += 0.5 * (points[k + 1] - points[k]);
    if (!points.empty()) points.back() += 0.5 * (b - points.back());
    return points;
}

namespace {

// Number of unit-domain copies on each side of [0, L) in wave runs.
constexpr int kWaveCopies = 4;

void finalize_fields(SimulationState& state) {
    state.gas.sort_by_position();
    for (auto& d : state.dust) d.sort_by_position();
    compute_density(state.gas, state.config.smoothing_length, state.wrap_period);
    for (auto& d : state.dust)
        compute_density(d, state.config.smoothing_length, state.wrap_period);
    equation_of_state(state.gas, state.config);
}

} // namespace

SimulationState setup_dustywave(const RunPreset& preset, const WaveSolution& oracle) {
    if (preset.problem != Problem::dusty_wave)
        throw SimulationError("setup_dustywave needs a DustyWave preset");
    const SimConfig& cfg = preset.config;
    if (oracle.params.t_stop != cfg.stopping_times ||
        oracle.params.epsilon != cfg.epsilon)
        throw SimulationError("wave oracle parameters do not match the preset");

    const double length = cfg.domain_length;
    const int n = cfg.n_sph;
    const int copies = 2 * kWaveCopies;

    SimulationState state;
    state.config = cfg;
    state.problem = Problem::dusty_wave;

    auto build_phase = [&](ParticleSet& set, const DensityProfile& profile,
                           auto velocity_at) {
        const double mass_total = integrate(profile, 0.0, length, 1e-14 * length);
        set.mass = mass_total / n;
        set.resize(static_cast<std::size_t>(n) * copies);
        const std::vector<double> base =
            place_particles_for_density(profile, n, 0.0, length);
        std::size_t idx = 0;
        for (int m = -kWaveCopies; m < kWaveCopies; ++m)
            for (int k = 0; k < n; ++k, ++idx) {
                set.x[idx] = base[k] + m * length;
                set.v[idx] = velocity_at(set.x[idx]);
            }
    };

    build_phase(state.gas,
                [&](double x) { return oracle.rho_g_at(x, 0.0); },
                [&](double x) { return oracle.v_at(x, 0.0); });
    // Isothermal run; e is constant and only echoed in output.
    const double e0 = cfg.sound_speed * cfg.sound_speed / (cfg.gamma - 1.0);
    for (auto& e : state.gas.e) e = e0;

    state.dust.resize(cfg.n_fractions);
    for (int i = 0; i < cfg.n_fractions; ++i) {
        state.dust[i].fraction = i;
        build_phase(state.dust[i],
                    [&, i](double x) { return oracle.rho_at(i, x, 0.0); },
                    [&, i](double x) { return oracle.u_at(i, x, 0.0); });
        for (auto& t : state.dust[i].t_stop) t = cfg.stopping_times[i];
    }

    const double w = cfg.cell_size;
    state.grid.width = w;
    state.grid.x0 = -kWaveCopies * length - 4.0 * w;
    state.grid.n = static_cast<int>(std::ceil(copies * length / w)) + 8;
    state.wrap_period = copies * length;

    finalize_fields(state);
    return state;
}

SimulationState setup_dustyshock(const RunPreset& preset) {
    if (preset.problem != Problem::dusty_shock)
        throw SimulationError("setup_dustyshock needs a DustyShock preset");
    const SimConfig& cfg = preset.config;
    const ShockInit init = shock_init();
    const double length = cfg.domain_length;
    const double mid = init.diaphragm * length;
    const double support = 2.0 * cfg.smoothing_length;

    SimulationState state;
    state.config = cfg;
    state.problem = Problem::dusty_shock;

    const DensityProfile gas_profile = [&](double x) {
        return x < mid ? init.rho_left : init.rho_right;
    };
    const double gas_mass_total =
        init.rho_left * mid + init.rho_right * (length - mid);

    auto build_phase = [&](ParticleSet& set, double phase_fraction_of_gas) {
        set.mass = phase_fraction_of_gas * gas_mass_total / cfg.n_sph;
        const DensityProfile profile = [&](double x) {
            return phase_fraction_of_gas * gas_profile(x);
        };
        const std::vector<double> active =
            place_particles_for_density(profile, cfg.n_sph, 0.0, length);

        // Motionless ghosts continue each uniform lattice one kernel support
        // beyond the domain.
        const double dx_left = set.mass / (phase_fraction_of_gas * init.rho_left);
        const double dx_right = set.mass / (phase_fraction_of_gas * init.rho_right);
        const int n_left = static_cast<int>(std::ceil(support / dx_left));
        const int n_right = static_cast<int>(std::ceil(support / dx_right));

        set.resize(active.size() + n_left + n_right);
        set.n_active = active.size();
        for (std::size_t k = 0; k < active.size(); ++k) set.x[k] = active[k];
        std::size_t idx = active.size();
        for (int j = 0; j < n_left; ++j, ++idx) set.x[idx] = -(j + 0.5) * dx_left;
        for (int j = 0; j < n_right; ++j, ++idx) set.x[idx] = length + (j + 0.5) * dx_right;
    };

    build_phase(state.gas, 1.0);
    for (std::size_t k = 0; k < state.gas.size(); ++k) {
        const bool on_left = state.gas.x[k] < mid;
        state.gas.e[k] = on_left ? init.e_left : init.e_right;
        state.gas.rho[k] = on_left ? init.rho_left : init.rho_right;
        state.gas.p[k] = on_left ? init.p_left : init.p_right;
        state.gas.sound[k] = std::sqrt(cfg.gamma * state.gas.p[k] / state.gas.rho[k]);
    }

    state.dust.resize(cfg.n_fractions);
    for (int i = 0; i < cfg.n_fractions; ++i) {
        ParticleSet& d = state.dust[i];
        d.fraction = i;
        build_phase(d, cfg.epsilon[i]);
        for (std::size_t k = 0; k < d.size(); ++k) {
            const bool on_left = d.x[k] < mid;
            const double rho_g = on_left ? init.rho_left : init.rho_right;
            const double p_g = on_left ? init.p_left : init.p_right;
            d.rho[k] = cfg.epsilon[i] * rho_g;
            d.t_stop[k] = cfg.grain_sizes[i] * cfg.grain_density /
                          (std::sqrt(p_g / rho_g) * rho_g);
        }
    }

    const double w = cfg.cell_size;
    state.grid.width = w;
    state.grid.x0 = -4.0 * w;
    state.grid.n = static_cast<int>(std::ceil(length / w)) + 8;

    finalize_fields(state);
    return state;
}

SimulationState setup(const RunPreset& preset) {
    if (preset.problem == Problem::dusty_wave)
        return setup_dustywave(preset, solve_wave(wave_params_for(preset)));
    return setup_dustyshock(preset);
}

} // namespace dusty
