#include "dusty/sph.hpp"

#include "dusty/errors.hpp"
#include "dusty/kernel.hpp"

#include <cmath>

namespace dusty {

namespace {

// Monaghan artificial viscosity for an approaching pair; zero otherwise.
double viscosity_term(const ParticleSet& gas, const SimConfig& cfg, int a, int b,
                      double r_ab) {
    if (!cfg.viscosity) return 0.0;
    const double v_ab = gas.v[a] - gas.v[b];
    const double vr = v_ab * r_ab;
    if (!(vr < 0.0)) return 0.0;
    const double nu = cfg.visc_limiter;
    const double mu = cfg.smoothing_length * vr / (r_ab * r_ab + nu * nu);
    const double c_ab = 0.5 * (gas.sound[a] + gas.sound[b]);
    const double rho_ab = 0.5 * (gas.rho[a] + gas.rho[b]);
    return (-cfg.visc_alpha * c_ab * mu + cfg.visc_beta * mu * mu) / rho_ab;
}

// Calls fn(a, b, x_a - x_b) for every particle a and same-set neighbor b
// within the kernel support, in fixed sorted order. A positive wrap_period
// additionally pairs the two ends of the domain as periodic images.
template <typename Fn>
void for_each_pair(const ParticleSet& set, double h, double wrap_period, Fn&& fn) {
    const auto& order = set.order;
    const std::size_t n = order.size();
    const double support = kernel_support(h);

    std::size_t lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const int a = order[i];
        const double xa = set.x[a];
        while (lo < n && set.x[order[lo]] < xa - support) ++lo;
        for (std::size_t j = lo; j < n && set.x[order[j]] <= xa + support; ++j)
            fn(a, order[j], xa - set.x[order[j]]);
    }

    if (wrap_period <= 0.0 || n == 0) return;
    const double x_max = set.x[order[n - 1]];
    const double x_min = set.x[order[0]];
    // Left band against right band through the periodic seam, both ways.
    for (std::size_t i = 0; i < n; ++i) {
        const int a = order[i];
        const double threshold = set.x[a] + wrap_period - support;
        if (threshold > x_max) break;
        for (std::size_t j = n; j-- > 0 && set.x[order[j]] >= threshold;)
            fn(a, order[j], set.x[a] - set.x[order[j]] + wrap_period);
    }
    for (std::size_t i = n; i-- > 0;) {
        const int a = order[i];
        const double threshold = set.x[a] - wrap_period + support;
        if (threshold < x_min) break;
        for (std::size_t j = 0; j < n && set.x[order[j]] <= threshold; ++j)
            fn(a, order[j], set.x[a] - set.x[order[j]] - wrap_period);
    }
}

} // namespace

void compute_density(ParticleSet& set, double h, double wrap_period) {
    std::vector<double> sum(set.size(), 0.0);
    for_each_pair(set, h, wrap_period, [&](int a, int b, double r_ab) {
        (void)b;
        sum[a] += kernel(r_ab, h).w;
    });
    for (std::size_t a = 0; a < set.n_active; ++a)
        set.rho[a] = set.mass * sum[a];
}

void equation_of_state(ParticleSet& gas, const SimConfig& cfg) {
    for (std::size_t a = 0; a < gas.n_active; ++a) {
        if (!(gas.rho[a] > 0.0))
            throw SimulationError("equation of state: non-positive density");
        if (cfg.eos == EosMode::adiabatic) {
            if (!(gas.e[a] > 0.0))
                throw SimulationError("equation of state: non-positive internal energy");
            gas.p[a] = gas.rho[a] * gas.e[a] * (cfg.gamma - 1.0);
            gas.sound[a] = std::sqrt(cfg.gamma * gas.p[a] / gas.rho[a]);
        } else {
            gas.p[a] = cfg.sound_speed * cfg.sound_speed * gas.rho[a];
            gas.sound[a] = cfg.sound_speed;
        }
    }
}

std::vector<double> gas_acceleration(const ParticleSet& gas, const SimConfig& cfg,
                                     double wrap_period) {
    std::vector<double> accel(gas.size(), 0.0);
    const double h = cfg.smoothing_length;
    for_each_pair(gas, h, wrap_period, [&](int a, int b, double r_ab) {
        if (a == b || static_cast<std::size_t>(a) >= gas.n_active) return;
        const double grad = kernel(r_ab, h).dw;
        const double pair = gas.p[b] / (gas.rho[b] * gas.rho[b]) +
                            gas.p[a] / (gas.rho[a] * gas.rho[a]) +
                            viscosity_term(gas, cfg, a, b, r_ab);
        accel[a] -= gas.mass * pair * grad;
    });
    for (std::size_t a = 0; a < gas.n_active; ++a)
        accel[a] += cfg.external_accel_gas;
    return accel;
}

void update_internal_energy(ParticleSet& gas, const SimConfig& cfg, double tau,
                            double wrap_period) {
    if (cfg.eos == EosMode::isothermal) return;
    const double h = cfg.smoothing_length;
    std::vector<double> pdv(gas.size(), 0.0);
    std::vector<double> heat(gas.size(), 0.0);
    for_each_pair(gas, h, wrap_period, [&](int a, int b, double r_ab) {
        if (a == b || static_cast<std::size_t>(a) >= gas.n_active) return;
        const double grad = kernel(r_ab, h).dw;
        const double v_ab = gas.v[a] - gas.v[b];
        pdv[a] += v_ab * grad;
        heat[a] += viscosity_term(gas, cfg, a, b, r_ab) * v_ab * grad;
    });
    for (std::size_t a = 0; a < gas.n_active; ++a) {
        const double rate = gas.mass * gas.p[a] / (gas.rho[a] * gas.rho[a]) * pdv[a] +
                            0.5 * gas.mass * heat[a];
        const double e_new = gas.e[a] + tau * rate;
        if (!(e_new > 0.0))
            throw SimulationError("internal-energy update produced e <= 0");
        gas.e[a] = e_new;
    }
}

} // namespace dusty
