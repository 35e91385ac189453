#include "dusty/drag.hpp"

#include "dusty/errors.hpp"
#include "dusty/kernel.hpp"
#include "dusty/sph.hpp"

#include <cmath>

namespace dusty {

CellDragSolution solve_cell_velocities(const CellGrid& grid, double tau) {
    const int n_cells = grid.layout.n;
    const int nf = grid.n_fractions;

    CellDragSolution sol;
    sol.v_new = grid.v_star;
    sol.u_new = grid.u_star;

    std::vector<double> rhs(nf), inv_b(nf), lambda(nf), w_rel(nf);
    for (int c = 0; c < n_cells; ++c) {
        if (grid.gas_members[c].empty()) continue;

        const double a_gas = grid.a_gas_star[c];
        double eps_sum = 0.0;
        double w_bar = grid.v_star[c];
        double a_bar = a_gas;
        double theta = 1.0;
        for (int i = 0; i < nf; ++i) {
            const auto idx = grid.at(c, i);
            const double eps = grid.eps_star[idx];
            const double t = grid.t_star[idx];
            eps_sum += eps;
            w_bar += eps * grid.u_star[idx];
            a_bar += eps * grid.a_dust_star[idx];
            // 1/B_i and t/(t+tau), both finite for t -> infinity.
            inv_b[i] = eps * tau / (t + tau);
            lambda[i] = 1.0 / (1.0 + tau / t);
            theta += inv_b[i];
            rhs[i] = (grid.v_star[c] - grid.u_star[idx]) +
                     tau * (a_gas - grid.a_dust_star[idx]);
        }
        const double w_new = w_bar + tau * a_bar;

        // Row i of the structured inverse applied to the right-hand side.
        for (int i = 0; i < nf; ++i) {
            double cross = 0.0;
            for (int j = 0; j < nf; ++j)
                if (j != i) cross += inv_b[j] * rhs[j];
            w_rel[i] = lambda[i] / theta * ((theta - inv_b[i]) * rhs[i] - cross);
        }

        // Back-transform to phase velocities.
        double w_rel_weighted = 0.0;
        for (int i = 0; i < nf; ++i) w_rel_weighted += grid.eps_star[grid.at(c, i)] * w_rel[i];
        sol.v_new[c] = (w_new + w_rel_weighted) / (1.0 + eps_sum);
        for (int i = 0; i < nf; ++i) {
            const double eps_i = grid.eps_star[grid.at(c, i)];
            sol.u_new[grid.at(c, i)] =
                (w_new - (1.0 + eps_sum - eps_i) * w_rel[i] + (w_rel_weighted - eps_i * w_rel[i])) /
                (1.0 + eps_sum);
        }
    }
    return sol;
}

std::vector<double> invert_drag_matrix(std::span<const double> b) {
    const std::size_t n = b.size();
    double beta = 1.0;
    for (double bi : b) {
        if (!(bi > 0.0))
            throw SimulationError("drag matrix coefficients must be positive");
        beta += 1.0 / bi;
    }
    std::vector<double> inv(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv[i * n + j] = (i == j) ? -(1.0 - b[i] * beta) / (beta * b[i] * b[i])
                                      : -1.0 / (beta * b[i] * b[j]);
    return inv;
}

double epstein_stopping_time(double grain_size, double grain_density,
                             double gas_pressure, double gas_density) {
    if (!(gas_pressure > 0.0) || !(gas_density > 0.0))
        throw SimulationError("Epstein stopping time needs positive gas state");
    return grain_size * grain_density /
           (std::sqrt(gas_pressure / gas_density) * gas_density);
}

void update_particle_velocities(const CellGrid& grid, ParticleSet& gas,
                                std::vector<ParticleSet>& dust,
                                const std::vector<double>& gas_accel,
                                const std::vector<double>& dust_accel,
                                const CellDragSolution& sol, double tau) {
    const int nf = grid.n_fractions;
    const double inv_tau = 1.0 / tau;

    for (int c = 0; c < grid.layout.n; ++c) {
        const bool has_gas = !grid.gas_members[c].empty();

        if (has_gas) {
            double denom = inv_tau;
            double pull = 0.0;  // drag toward the solved dust cell velocities
            for (int i = 0; i < nf; ++i) {
                const auto idx = grid.at(c, i);
                const double rate = grid.eps_star[idx] / grid.t_star[idx];
                denom += rate;
                pull += rate * sol.u_new[idx];
            }
            for (int a : grid.gas_members[c])
                gas.v[a] = (gas.v[a] * inv_tau + pull + gas_accel[a]) / denom;
        }

        for (int i = 0; i < nf; ++i) {
            const auto& members = grid.dust_members[i][c];
            if (members.empty()) continue;
            if (has_gas) {
                const double inv_t = 1.0 / grid.t_star[grid.at(c, i)];
                const double denom = inv_tau + inv_t;
                const double pull = sol.v_new[c] * inv_t;
                for (int l : members)
                    dust[i].v[l] = (dust[i].v[l] * inv_tau + pull + dust_accel[i]) / denom;
            } else {
                for (int l : members)
                    dust[i].v[l] += tau * dust_accel[i];
            }
        }
    }
}

void mk_drag_step(ParticleSet& gas, ParticleSet& dust, const SimConfig& cfg,
                  double tau) {
    if (cfg.n_fractions != 1 || cfg.drag_mode != DragMode::epstein)
        throw SimulationError("MK drag step supports exactly one dust fraction in Epstein mode");

    const double h = cfg.smoothing_length;
    const double support = kernel_support(h);
    const double eta2 = 0.001 * h * h;
    const double s_rho_s = cfg.grain_sizes[0] * cfg.grain_density;

    const std::vector<double> accel = gas_acceleration(gas, cfg);
    std::vector<double> gas_drag(gas.size(), 0.0);
    std::vector<double> dust_drag(dust.size(), 0.0);

    // One pass over gas-dust pairs; each pair feeds both phases so the drag
    // exchange cancels globally to round-off.
    const auto& dorder = dust.order;
    std::size_t lo = 0;
    for (std::size_t ia = 0; ia < gas.order.size(); ++ia) {
        const int a = gas.order[ia];
        const double xa = gas.x[a];
        // K_al / (rho_a rho_l) with K_al = rho_l rho_a c_a / (s rho_s) and
        // c_a = sqrt(p_a / rho_a), the same sound speed the Epstein stopping
        // time uses.
        const double coef = std::sqrt(gas.p[a] / gas.rho[a]) / s_rho_s;
        while (lo < dorder.size() && dust.x[dorder[lo]] < xa - support) ++lo;
        for (std::size_t jl = lo; jl < dorder.size() && dust.x[dorder[jl]] <= xa + support; ++jl) {
            const int l = dorder[jl];
            const double r_la = dust.x[l] - gas.x[a];
            const double w = kernel(r_la, h).w;
            if (w == 0.0) continue;
            const double t = coef * (gas.v[a] - dust.v[l]) * r_la * r_la /
                             (r_la * r_la + eta2) * w;
            gas_drag[a] -= dust.mass * t;
            dust_drag[l] += gas.mass * t;
        }
    }

    for (std::size_t a = 0; a < gas.n_active; ++a)
        gas.v[a] += tau * (accel[a] + gas_drag[a]);
    for (std::size_t l = 0; l < dust.n_active; ++l)
        dust.v[l] += tau * (dust_drag[l] + cfg.external_accel_dust[0]);
}

} // namespace dusty
