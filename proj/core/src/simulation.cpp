#include "dusty/simulation.hpp"

#include "dusty/drag.hpp"
#include "dusty/errors.hpp"
#include "dusty/kernel.hpp"
#include "dusty/sph.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace dusty {

double courant_limit(const SimulationState& state) {
    double speed = 0.0;
    for (std::size_t a = 0; a < state.gas.n_active; ++a) {
        speed = std::max(speed, state.gas.sound[a]);
        speed = std::max(speed, std::abs(state.gas.v[a]));
    }
    for (const auto& d : state.dust)
        for (std::size_t l = 0; l < d.n_active; ++l)
            speed = std::max(speed, std::abs(d.v[l]));
    if (speed == 0.0) return std::numeric_limits<double>::infinity();
    return state.config.smoothing_length * state.config.cfl / speed;
}

namespace {

// Relative per-cell momentum imbalance of one drag update:
//   | P^{n+1} - P^n - tau (sum of phase forces) | / (gross momentum flow).
double audit_cells(const CellGrid& grid, const ParticleSet& gas,
                   const std::vector<ParticleSet>& dust,
                   const std::vector<double>& v_old,
                   const std::vector<std::vector<double>>& u_old,
                   const std::vector<double>& gas_accel,
                   const std::vector<double>& dust_accel, double tau) {
    double worst = 0.0;
    for (int c = 0; c < grid.layout.n; ++c) {
        if (grid.gas_members[c].empty()) continue;
        double balance = 0.0, gross = 0.0;
        for (int a : grid.gas_members[c]) {
            balance += gas.mass * (gas.v[a] - v_old[a] - tau * gas_accel[a]);
            // The sound speed sets the momentum scale of a quiescent cell, so
            // the ratio stays meaningful where all velocities are zero.
            gross += gas.mass * (std::abs(gas.v[a]) + std::abs(v_old[a]) +
                                 tau * std::abs(gas_accel[a]) + gas.sound[a]);
        }
        for (std::size_t i = 0; i < dust.size(); ++i)
            for (int l : grid.dust_members[i][c]) {
                balance += dust[i].mass * (dust[i].v[l] - u_old[i][l] - tau * dust_accel[i]);
                gross += dust[i].mass * (std::abs(dust[i].v[l]) + std::abs(u_old[i][l]) +
                                         tau * std::abs(dust_accel[i]));
            }
        if (gross > 0.0) worst = std::max(worst, std::abs(balance) / gross);
    }
    return worst;
}

} // namespace

void step(SimulationState& state) {
    SimConfig& cfg = state.config;
    const double tau = cfg.timestep;

    // Non-drag forces and the energy update, both from time-level-n fields.
    std::vector<double> accel;
    if (cfg.scheme == DragScheme::idic)
        accel = gas_acceleration(state.gas, cfg, state.wrap_period);
    update_internal_energy(state.gas, cfg, tau, state.wrap_period);

    if (cfg.scheme == DragScheme::idic) {
        CellGrid grid = build_cells(state.grid, state.gas, state.dust);
        refresh_stopping_times(grid, state.gas, state.dust, cfg);
        average_cells(grid, state.gas, state.dust, accel, cfg.external_accel_dust);
        const CellDragSolution sol = solve_cell_velocities(grid, tau);

        std::vector<double> v_old;
        std::vector<std::vector<double>> u_old;
        if (state.audit_momentum) {
            v_old = state.gas.v;
            u_old.reserve(state.dust.size());
            for (const auto& d : state.dust) u_old.push_back(d.v);
        }

        update_particle_velocities(grid, state.gas, state.dust, accel,
                                   cfg.external_accel_dust, sol, tau);

        if (state.audit_momentum)
            state.max_momentum_imbalance =
                std::max(state.max_momentum_imbalance,
                         audit_cells(grid, state.gas, state.dust, v_old, u_old,
                                     accel, cfg.external_accel_dust, tau));
    } else {
        mk_drag_step(state.gas, state.dust[0], cfg, tau);
    }

    // Advance positions of active particles; ghosts are motionless.
    for (std::size_t a = 0; a < state.gas.n_active; ++a)
        state.gas.x[a] += tau * state.gas.v[a];
    for (auto& d : state.dust)
        for (std::size_t l = 0; l < d.n_active; ++l)
            d.x[l] += tau * d.v[l];

    state.gas.sort_by_position();
    for (auto& d : state.dust) d.sort_by_position();

    compute_density(state.gas, cfg.smoothing_length, state.wrap_period);
    for (auto& d : state.dust)
        compute_density(d, cfg.smoothing_length, state.wrap_period);
    equation_of_state(state.gas, cfg);

    state.time += tau;
    ++state.step_index;

    const double limit = courant_limit(state);
    state.min_courant_limit = (state.step_index == 1)
                                  ? limit
                                  : std::min(state.min_courant_limit, limit);
    if (tau > limit) state.courant_exceeded = true;
}

namespace {

double shepard_field(const ParticleSet& set, double h, double x,
                     const std::vector<double>& field) {
    double num = 0.0, den = 0.0;
    const double support = kernel_support(h);
    const auto& order = set.order;
    // Window of particles within the kernel support of x.
    auto begin = std::lower_bound(order.begin(), order.end(), x - support,
                                  [&](int idx, double value) { return set.x[idx] < value; });
    for (auto it = begin; it != order.end() && set.x[*it] <= x + support; ++it) {
        const double w = kernel(x - set.x[*it], h).w * set.mass / set.rho[*it];
        num += w * field[*it];
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

double shepard_density(const ParticleSet& set, double h, double x) {
    double num = 0.0, den = 0.0;
    const double support = kernel_support(h);
    const auto& order = set.order;
    auto begin = std::lower_bound(order.begin(), order.end(), x - support,
                                  [&](int idx, double value) { return set.x[idx] < value; });
    for (auto it = begin; it != order.end() && set.x[*it] <= x + support; ++it) {
        const KernelEval k = kernel(x - set.x[*it], h);
        num += set.mass * k.w;
        den += set.mass / set.rho[*it] * k.w;
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace

ProbeSample probe_state(const SimulationState& state, double x) {
    const double h = state.config.smoothing_length;
    ProbeSample s;
    s.time = state.time;
    s.rho_g = shepard_density(state.gas, h, x);
    s.v = shepard_field(state.gas, h, x, state.gas.v);
    s.rho.reserve(state.dust.size());
    s.u.reserve(state.dust.size());
    for (const auto& d : state.dust) {
        s.rho.push_back(shepard_density(d, h, x));
        s.u.push_back(shepard_field(d, h, x, d.v));
    }
    return s;
}

RunResult run(SimulationState& state, const RunOptions& options,
              const SnapshotFn& on_snapshot) {
    const double end_time = options.end_time.value_or(state.config.end_time);
    const double tau = state.config.timestep;
    const long n_steps = (end_time <= state.time)
                             ? 0
                             : static_cast<long>(std::ceil((end_time - state.time) / tau - 1e-9));

    state.audit_momentum = options.audit_momentum;

    // Snapshot schedule: evenly spaced step indices, always including the end.
    std::vector<long> schedule;
    const int k = std::max(options.snapshots, 1);
    for (int j = 1; j <= k; ++j) {
        const long s = (n_steps * j) / k;
        if (s > 0 && (schedule.empty() || schedule.back() != s)) schedule.push_back(s);
    }

    RunResult result;
    if (on_snapshot) on_snapshot(state, 0);
    if (options.probe_x) result.probe.push_back(probe_state(state, *options.probe_x));

    std::size_t next = 0;
    int snap_index = 1;
    const auto t0 = std::chrono::steady_clock::now();
    for (long n = 1; n <= n_steps; ++n) {
        step(state);
        if (options.probe_x) result.probe.push_back(probe_state(state, *options.probe_x));
        if (next < schedule.size() && schedule[next] == n) {
            if (on_snapshot) on_snapshot(state, snap_index);
            ++snap_index;
            ++next;
        }
    }
    const auto t1 = std::chrono::steady_clock::now();

    result.metrics.steps = n_steps;
    result.metrics.wall_seconds_per_step =
        n_steps > 0 ? std::chrono::duration<double>(t1 - t0).count() / n_steps : 0.0;
    result.metrics.max_momentum_imbalance = state.max_momentum_imbalance;
    result.metrics.min_courant_limit = state.min_courant_limit;
    result.metrics.courant_exceeded = state.courant_exceeded;
    return result;
}

} // namespace dusty
