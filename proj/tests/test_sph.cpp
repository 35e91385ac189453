/// Density summation, equation of state, pressure/viscosity acceleration,
/// and the explicit internal-energy update.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusty/errors.hpp"
#include "dusty/kernel.hpp"
#include "dusty/particles.hpp"
#include "dusty/sph.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace dusty;

namespace {

ParticleSet make_gas(const std::vector<double>& x, double mass) {
    ParticleSet set;
    set.fraction = -1;
    set.mass = mass;
    set.resize(x.size());
    set.x = x;
    set.sort_by_position();
    return set;
}

SimConfig test_config(double h, bool viscosity) {
    SimConfig cfg;
    cfg.domain_length = 1.0;
    cfg.end_time = 1.0;
    cfg.timestep = 1e-3;
    cfg.smoothing_length = h;
    cfg.eos = EosMode::adiabatic;
    cfg.gamma = 1.4;
    cfg.viscosity = viscosity;
    cfg.n_fractions = 0;
    cfg.n_sph = 1;
    cfg.validate();
    return cfg;
}

// Scalar transcription of the printed pair force, evaluated directly.
double pair_force_oracle(double pa, double pb, double rhoa, double rhob,
                         double va, double vb, double xa, double xb,
                         double ca, double cb, double h, double nu,
                         double alpha, double beta, double mass) {
    const double r = xa - xb;
    const double vr = (va - vb) * r;
    double visc = 0.0;
    if (vr < 0.0) {
        const double mu = h * vr / (r * r + nu * nu);
        visc = (-alpha * 0.5 * (ca + cb) * mu + beta * mu * mu) / (0.5 * (rhoa + rhob));
    }
    return -mass * (pb / (rhob * rhob) + pa / (rhoa * rhoa) + visc) * kernel(r, h).dw;
}

} // namespace

TEST_CASE("density summation") {
    SUBCASE("isolated particle keeps only its self-contribution") {
        ParticleSet set = make_gas({0.3}, 1.0);
        compute_density(set, 1.0);
        CHECK(set.rho[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("two particles beyond the support do not interact") {
        ParticleSet set = make_gas({0.0, 2.5}, 0.7);
        compute_density(set, 1.0);
        CHECK(set.rho[0] == doctest::Approx(0.7 * 2.0 / 3.0).epsilon(1e-15));
        CHECK(set.rho[1] == doctest::Approx(0.7 * 2.0 / 3.0).epsilon(1e-15));
    }
    SUBCASE("long uniform lattice approaches unit density") {
        const double dx = 1e-3;  // dx << h
        std::vector<double> x(4001);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (double(i) - 2000.0) * dx;
        ParticleSet set = make_gas(x, dx);
        compute_density(set, 0.05);
        CHECK(set.rho[2000] == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("periodic wrap completes the support across the seam") {
        // 20 particles on [0,1) with period 1: every particle sees the same
        // uniform neighborhood, including the ones at the ends.
        std::vector<double> x(20);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i + 0.5) / 20.0;
        ParticleSet set = make_gas(x, 1.0 / 20.0);
        compute_density(set, 0.1, 1.0);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(set.rho[i] == doctest::Approx(set.rho[0]).epsilon(1e-14));
    }
}

TEST_CASE("equation of state") {
    ParticleSet gas = make_gas({0.0, 1.0, 2.0}, 1.0);
    SimConfig cfg = test_config(0.5, false);

    SUBCASE("adiabatic anchors from the shock-tube states") {
        gas.rho = {1.0, 0.125, 1.0};
        gas.e = {2.5, 2.0, 2.5};
        equation_of_state(gas, cfg);
        CHECK(gas.p[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(gas.p[1] == doctest::Approx(0.1).epsilon(1e-14));
        CHECK(gas.sound[0] == doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
    }
    SUBCASE("isothermal closure") {
        cfg.eos = EosMode::isothermal;
        cfg.sound_speed = 1.0;
        gas.rho = {1.0, 0.5, 2.0};
        gas.e = {2.5, 2.5, 2.5};
        equation_of_state(gas, cfg);
        CHECK(gas.p[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(gas.p[1] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(gas.sound[2] == 1.0);
        CHECK(gas.e[0] == 2.5);  // untouched
    }
    SUBCASE("non-positive state is rejected") {
        gas.rho = {1.0, -1.0, 1.0};
        gas.e = {2.5, 2.5, 2.5};
        CHECK_THROWS_AS(equation_of_state(gas, cfg), SimulationError);
        gas.rho = {1.0, 1.0, 1.0};
        gas.e = {2.5, 0.0, 2.5};
        CHECK_THROWS_AS(equation_of_state(gas, cfg), SimulationError);
    }
}

TEST_CASE("gas acceleration") {
    SimConfig cfg = test_config(0.1, true);

    SUBCASE("uniform state with symmetric neighbors gives zero force") {
        std::vector<double> x(41);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = i * 0.025;
        ParticleSet gas = make_gas(x, 0.025);
        compute_density(gas, cfg.smoothing_length);
        gas.e.assign(x.size(), 2.5);
        equation_of_state(gas, cfg);
        const auto accel = gas_acceleration(gas, cfg);
        CHECK(std::abs(accel[20]) < 1e-12);
    }

    SUBCASE("receding pair feels pure pressure, approaching pair matches the oracle") {
        ParticleSet gas = make_gas({0.0, 0.05}, 0.03);
        gas.rho = {1.1, 0.9};
        gas.p = {1.2, 0.8};
        gas.sound = {std::sqrt(1.4 * 1.2 / 1.1), std::sqrt(1.4 * 0.8 / 0.9)};
        gas.e = {1.0, 1.0};

        gas.v = {-0.3, 0.4};  // receding
        auto accel = gas_acceleration(gas, cfg);
        const double pressure_only =
            -0.03 * (gas.p[1] / (gas.rho[1] * gas.rho[1]) + gas.p[0] / (gas.rho[0] * gas.rho[0])) *
            kernel(-0.05, cfg.smoothing_length).dw;
        CHECK(accel[0] == doctest::Approx(pressure_only).epsilon(1e-14));

        gas.v = {0.5, -0.2};  // approaching
        accel = gas_acceleration(gas, cfg);
        const double expected = pair_force_oracle(
            gas.p[0], gas.p[1], gas.rho[0], gas.rho[1], gas.v[0], gas.v[1], 0.0, 0.05,
            gas.sound[0], gas.sound[1], cfg.smoothing_length, cfg.visc_limiter,
            cfg.visc_alpha, cfg.visc_beta, gas.mass);
        CHECK(accel[0] == doctest::Approx(expected).epsilon(1e-14));
        // Viscosity decelerates the approach and is dissipative on both sides.
        CHECK(accel[0] < pair_force_oracle(gas.p[0], gas.p[1], gas.rho[0], gas.rho[1],
                                           0.0, 0.0, 0.0, 0.05, gas.sound[0], gas.sound[1],
                                           cfg.smoothing_length, cfg.visc_limiter,
                                           cfg.visc_alpha, cfg.visc_beta, gas.mass));
    }

    SUBCASE("pairwise momentum conservation on random configurations") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> pos(0.0, 1.0), vel(-1.0, 1.0),
            energy(0.5, 3.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(60);
            for (auto& xi : x) xi = pos(rng);
            ParticleSet gas = make_gas(x, 1.0 / 60.0);
            for (auto& vi : gas.v) vi = vel(rng);
            for (auto& ei : gas.e) ei = energy(rng);
            compute_density(gas, cfg.smoothing_length);
            equation_of_state(gas, cfg);
            const auto accel = gas_acceleration(gas, cfg);
            const double total = std::accumulate(accel.begin(), accel.end(), 0.0);
            double scale = 0.0;
            for (double a : accel) scale += std::abs(a);
            CHECK(std::abs(total) <= 1e-13 * std::max(scale, 1.0));
        }
    }

    SUBCASE("external gas acceleration is added") {
        cfg.external_accel_gas = 0.75;
        ParticleSet gas = make_gas({0.0}, 1.0);
        gas.rho = {1.0};
        gas.p = {1.0};
        gas.sound = {1.0};
        const auto accel = gas_acceleration(gas, cfg);
        CHECK(accel[0] == 0.75);
    }
}

TEST_CASE("internal-energy update") {
    SimConfig cfg = test_config(0.1, true);

    SUBCASE("equal velocities leave the energy unchanged") {
        std::vector<double> x(21);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = i * 0.03;
        ParticleSet gas = make_gas(x, 0.03);
        gas.v.assign(x.size(), 0.7);
        gas.e.assign(x.size(), 2.0);
        compute_density(gas, cfg.smoothing_length);
        equation_of_state(gas, cfg);
        update_internal_energy(gas, cfg, 1e-3);
        for (double e : gas.e) CHECK(e == 2.0);
    }

    SUBCASE("isothermal mode skips the update") {
        cfg.eos = EosMode::isothermal;
        ParticleSet gas = make_gas({0.0, 0.05}, 1.0);
        gas.v = {1.0, -1.0};
        gas.rho = {1.0, 1.0};
        gas.e = {2.5, 2.5};
        gas.p = {1.0, 1.0};
        update_internal_energy(gas, cfg, 1e-3);
        CHECK(gas.e[0] == 2.5);
        CHECK(gas.e[1] == 2.5);
    }

    SUBCASE("uniform compression heats; matches an independent pair summation") {
        std::vector<double> x(41);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = i * 0.03;
        ParticleSet gas = make_gas(x, 0.03);
        for (std::size_t i = 0; i < x.size(); ++i) gas.v[i] = -x[i];  // contraction
        gas.e.assign(x.size(), 2.0);
        compute_density(gas, cfg.smoothing_length);
        equation_of_state(gas, cfg);

        // Direct double-loop transcription of the printed update.
        const std::size_t probe = 20;
        double pdv = 0.0, heat = 0.0;
        for (std::size_t b = 0; b < x.size(); ++b) {
            if (b == probe) continue;
            const double r = gas.x[probe] - gas.x[b];
            const double grad = kernel(r, cfg.smoothing_length).dw;
            const double vab = gas.v[probe] - gas.v[b];
            double visc = 0.0;
            if (vab * r < 0.0) {
                const double mu = cfg.smoothing_length * vab * r /
                                  (r * r + cfg.visc_limiter * cfg.visc_limiter);
                visc = (-cfg.visc_alpha * 0.5 * (gas.sound[probe] + gas.sound[b]) * mu +
                        cfg.visc_beta * mu * mu) /
                       (0.5 * (gas.rho[probe] + gas.rho[b]));
            }
            pdv += vab * grad;
            heat += visc * vab * grad;
        }
        const double tau = 1e-3;
        const double expected =
            2.0 + tau * (gas.mass * gas.p[probe] / (gas.rho[probe] * gas.rho[probe]) * pdv +
                         0.5 * gas.mass * heat);
        CHECK(expected > 2.0);  // compression heats

        update_internal_energy(gas, cfg, tau);
        CHECK(gas.e[probe] == doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("a non-positive result is a step failure") {
        ParticleSet gas = make_gas({0.0, 0.01}, 1.0);
        gas.v = {-50.0, 50.0};  // violent expansion
        gas.rho = {1.0, 1.0};
        gas.e = {1e-9, 1e-9};
        gas.p = {1.0, 1.0};
        gas.sound = {1.0, 1.0};
        CHECK_THROWS_AS(update_internal_energy(gas, cfg, 1.0), SimulationError);
    }
}
