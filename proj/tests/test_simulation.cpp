/// The time step, run loop, Courant bookkeeping, and conservation
/// invariants of whole simulations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusty/config.hpp"
#include "dusty/setup.hpp"
#include "dusty/simulation.hpp"
#include "dusty/sph.hpp"
#include "dusty/wave.hpp"

#include <cmath>
#include <numeric>

using namespace dusty;

namespace {

// A small wave run for fast invariant checks: DW2 physics at reduced count.
RunPreset small_wave() {
    RunPreset rp = preset("DW2");
    rp.config.n_sph = 60;
    rp.config.smoothing_length = 0.05;
    rp.config.cell_size = 0.025;
    rp.config.timestep = 5e-3;
    return rp;
}

double total_momentum(const SimulationState& s) {
    double p = 0.0;
    for (std::size_t k = 0; k < s.gas.n_active; ++k) p += s.gas.mass * s.gas.v[k];
    for (const auto& d : s.dust)
        for (std::size_t k = 0; k < d.n_active; ++k) p += d.mass * d.v[k];
    return p;
}

} // namespace

TEST_CASE("uniform state is an exact equilibrium of the step") {
    RunPreset rp = small_wave();
    // Zero-amplitude wave: constant backgrounds, zero velocities.
    WaveParams params = wave_params_for(rp);
    params.amplitude = 0.0;
    SimulationState state = setup_dustywave(rp, solve_wave(params));

    const std::vector<double> x0 = state.gas.x;
    const std::vector<double> rho0 = state.gas.rho;
    step(state);
    CHECK(state.time == doctest::Approx(5e-3).epsilon(1e-12));
    CHECK(state.step_index == 1);
    for (std::size_t k = 0; k < state.gas.size(); k += 37) {
        CHECK(state.gas.v[k] == 0.0);
        CHECK(state.gas.x[k] == x0[k]);
        CHECK(state.gas.rho[k] == doctest::Approx(rho0[k]).epsilon(1e-14));
    }
    for (const auto& d : state.dust)
        for (std::size_t k = 0; k < d.size(); k += 37) CHECK(d.v[k] == 0.0);
}

TEST_CASE("drag-free step equals a hand-stepped pure SPH update") {
    RunPreset rp = small_wave();
    rp.config.stopping_times = {1e30, 1e30, 1e30};  // effectively no drag
    const WaveSolution wave = solve_wave(wave_params_for(rp));
    SimulationState state = setup_dustywave(rp, wave);

    // Expected: v' = v + tau A, x' = x + tau v', with A from the same fields.
    const std::vector<double> accel =
        gas_acceleration(state.gas, rp.config, state.wrap_period);
    std::vector<double> v_expect = state.gas.v;
    std::vector<double> x_expect = state.gas.x;
    for (std::size_t k = 0; k < v_expect.size(); ++k) {
        v_expect[k] += rp.config.timestep * accel[k];
        x_expect[k] += rp.config.timestep * v_expect[k];
    }
    std::vector<double> u_expect = state.dust[0].v;  // dust coasts

    step(state);
    for (std::size_t k = 0; k < state.gas.size(); k += 13) {
        CHECK(state.gas.v[k] == doctest::Approx(v_expect[k]).epsilon(1e-10));
        CHECK(state.gas.x[k] == doctest::Approx(x_expect[k]).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < state.dust[0].size(); k += 13)
        CHECK(state.dust[0].v[k] == doctest::Approx(u_expect[k]).epsilon(1e-12));
}

TEST_CASE("wave runs conserve momentum and mass to machine precision") {
    RunPreset rp = small_wave();
    SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));
    state.audit_momentum = true;

    const double p0 = total_momentum(state);
    const double mass0 = state.gas.mass * state.gas.n_active +
                         state.dust[0].mass * state.dust[0].n_active;
    double momentum_scale = state.gas.mass * state.gas.n_active;  // mass * unit speed
    for (int n = 0; n < 40; ++n) {
        step(state);
        CHECK(std::abs(total_momentum(state) - p0) <= 1e-13 * momentum_scale);
    }
    CHECK(state.max_momentum_imbalance < 1e-13);
    // Particle masses never change, so total mass is exactly constant.
    CHECK(state.gas.mass * state.gas.n_active +
              state.dust[0].mass * state.dust[0].n_active ==
          mass0);
}

TEST_CASE("wave particles keep their ordering (no trajectory crossing)") {
    RunPreset rp = small_wave();
    SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));
    RunOptions opts;
    opts.snapshots = 1;
    run(state, opts);
    CHECK(state.time == doctest::Approx(2.0).epsilon(1e-12));
    for (const ParticleSet* set : {&state.gas, &state.dust[0], &state.dust[2]})
        for (std::size_t i = 1; i < set->order.size(); ++i)
            CHECK(set->x[set->order[i]] > set->x[set->order[i - 1]]);
}

TEST_CASE("courant bookkeeping") {
    RunPreset rp = small_wave();
    SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));

    SUBCASE("limit is h CFL / max speed") {
        // Sound speed 1 dominates the 1e-4 velocities.
        CHECK(courant_limit(state) == doctest::Approx(0.05 * 0.5 / 1.0).epsilon(1e-4));
        state.gas.v[0] = 4.0;
        CHECK(courant_limit(state) == doctest::Approx(0.05 * 0.5 / 4.0).epsilon(1e-12));
        state.gas.v[0] = 0.0;
        state.dust[1].v[0] = -8.0;
        CHECK(courant_limit(state) == doctest::Approx(0.05 * 0.5 / 8.0).epsilon(1e-12));
    }
    SUBCASE("a run records violations without adapting the step") {
        RunPreset tight = small_wave();
        tight.config.timestep = 0.03;  // above h CFL / c_s = 0.025
        tight.config.end_time = 0.09;
        SimulationState s = setup_dustywave(tight, solve_wave(wave_params_for(tight)));
        RunOptions opts;
        const RunResult res = run(s, opts);
        CHECK(res.metrics.courant_exceeded);
        CHECK(res.metrics.min_courant_limit == doctest::Approx(0.025).epsilon(1e-3));
        CHECK(res.metrics.steps == 3);
    }
}

TEST_CASE("run loop scheduling") {
    RunPreset rp = small_wave();

    SUBCASE("end time zero emits only the initial snapshot") {
        SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));
        RunOptions opts;
        opts.end_time = 0.0;
        int snapshots = 0, last_index = -1;
        const RunResult res = run(state, opts, [&](const SimulationState&, int idx) {
            ++snapshots;
            last_index = idx;
        });
        CHECK(res.metrics.steps == 0);
        CHECK(snapshots == 1);
        CHECK(last_index == 0);
    }
    SUBCASE("DW cadence: 400 steps, 10 snapshots plus the initial state") {
        SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));
        RunOptions opts;
        opts.snapshots = 10;
        std::vector<double> at_times;
        const RunResult res = run(state, opts, [&](const SimulationState& s, int) {
            at_times.push_back(s.time);
        });
        CHECK(res.metrics.steps == 400);
        CHECK(at_times.size() == 11);
        CHECK(at_times.front() == 0.0);
        CHECK(at_times.back() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(at_times[5] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("DS1 cadence: 40 steps to T = 0.2") {
        SimulationState state = setup_dustyshock(preset("DS1"));
        RunOptions opts;
        opts.snapshots = 1;
        opts.end_time = 0.05;  // 10 steps is enough for the bookkeeping check
        const RunResult res = run(state, opts);
        CHECK(res.metrics.steps == 10);
    }
    SUBCASE("probe records one sample per step plus the initial one") {
        SimulationState state = setup_dustywave(rp, solve_wave(wave_params_for(rp)));
        RunOptions opts;
        opts.end_time = 0.05;
        opts.probe_x = 0.0;
        const RunResult res = run(state, opts);
        REQUIRE(res.probe.size() == 11);
        CHECK(res.probe.front().time == 0.0);
        // The probe tracks the oracle at the wave amplitude scale.
        const WaveSolution wave = solve_wave(wave_params_for(rp));
        CHECK(std::abs(res.probe.front().v - wave.v_at(0.0, 0.0)) < 2e-6);
        CHECK(res.probe.front().rho_g == doctest::Approx(1.0 + 1e-4).epsilon(2e-5));
    }
}

TEST_CASE("one wave step stays glued to the oracle") {
    // Fine-resolution sanity: a DW2-scale step should track the linear
    // solution to a small fraction of the amplitude.
    RunPreset rp = preset("DW2");
    const WaveSolution wave = solve_wave(wave_params_for(rp));
    SimulationState state = setup_dustywave(rp, wave);
    for (int n = 0; n < 10; ++n) step(state);
    double worst = 0.0;
    for (std::size_t k = 0; k < state.gas.size(); ++k) {
        if (state.gas.x[k] < 0.0 || state.gas.x[k] > 1.0) continue;
        worst = std::max(worst,
                         std::abs(state.gas.v[k] - wave.v_at(state.gas.x[k], state.time)));
    }
    CHECK(worst < 0.05 * 1e-4);
}
