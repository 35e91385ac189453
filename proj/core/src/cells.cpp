#include "dusty/cells.hpp"

#include "dusty/errors.hpp"

#include <cmath>
#include <limits>

namespace dusty {

int CellLayout::cell_of(double x) const {
    return static_cast<int>(std::floor((x - x0) / width));
}

CellGrid build_cells(const CellLayout& layout, const ParticleSet& gas,
                     const std::vector<ParticleSet>& dust) {
    CellGrid grid;
    grid.layout = layout;
    grid.n_fractions = static_cast<int>(dust.size());
    grid.gas_members.assign(layout.n, {});

    auto bin = [&layout](const ParticleSet& set, std::vector<std::vector<int>>& members) {
        for (std::size_t i = 0; i < set.n_active; ++i) {
            const int c = layout.cell_of(set.x[i]);
            if (c < 0 || c >= layout.n)
                throw SimulationError("particle at x=" + std::to_string(set.x[i]) +
                                      " is outside the cell grid");
            members[c].push_back(static_cast<int>(i));
        }
    };

    bin(gas, grid.gas_members);
    grid.dust_members.resize(dust.size());
    for (std::size_t i = 0; i < dust.size(); ++i) {
        grid.dust_members[i].assign(layout.n, {});
        bin(dust[i], grid.dust_members[i]);
    }

    // The method cannot form drag in cells that hold gas but miss a fraction.
    for (int c = 0; c < layout.n; ++c) {
        if (grid.gas_members[c].empty()) continue;
        for (int i = 0; i < grid.n_fractions; ++i)
            if (grid.dust_members[i][c].empty()) throw EmptyFractionCell(c, i);
    }
    return grid;
}

void refresh_stopping_times(const CellGrid& grid, const ParticleSet& gas,
                            std::vector<ParticleSet>& dust, const SimConfig& cfg) {
    if (cfg.drag_mode == DragMode::fixed_stopping_time) {
        for (std::size_t i = 0; i < dust.size(); ++i)
            for (std::size_t l = 0; l < dust[i].n_active; ++l)
                dust[i].t_stop[l] = cfg.stopping_times[i];
        return;
    }

    const int n_cells = grid.layout.n;
    for (int c = 0; c < n_cells; ++c) {
        const auto& members = grid.gas_members[c];
        double t_scale = std::numeric_limits<double>::infinity();
        if (!members.empty()) {
            double c_mean = 0.0, rho_mean = 0.0;
            for (int a : members) {
                c_mean += std::sqrt(gas.p[a] / gas.rho[a]);
                rho_mean += gas.rho[a];
            }
            c_mean /= static_cast<double>(members.size());
            rho_mean /= static_cast<double>(members.size());
            t_scale = cfg.grain_density / (c_mean * rho_mean);
        }
        for (std::size_t i = 0; i < dust.size(); ++i) {
            const double t = cfg.grain_sizes[i] * t_scale;
            for (int l : grid.dust_members[i][c])
                dust[i].t_stop[l] = t;
        }
    }
}

void average_cells(CellGrid& grid, const ParticleSet& gas,
                   const std::vector<ParticleSet>& dust,
                   const std::vector<double>& gas_accel,
                   const std::vector<double>& dust_accel) {
    const int n_cells = grid.layout.n;
    const int nf = grid.n_fractions;
    grid.v_star.assign(n_cells, 0.0);
    grid.a_gas_star.assign(n_cells, 0.0);
    grid.u_star.assign(static_cast<std::size_t>(n_cells) * nf, 0.0);
    grid.t_star.assign(static_cast<std::size_t>(n_cells) * nf, 0.0);
    grid.eps_star.assign(static_cast<std::size_t>(n_cells) * nf, 0.0);
    grid.a_dust_star.assign(static_cast<std::size_t>(n_cells) * nf, 0.0);

    for (int c = 0; c < n_cells; ++c) {
        const auto& members = grid.gas_members[c];
        const int k = static_cast<int>(members.size());
        if (k > 0) {
            double v_sum = 0.0, a_sum = 0.0;
            for (int a : members) {
                v_sum += gas.v[a];
                a_sum += gas_accel[a];
            }
            grid.v_star[c] = v_sum / k;
            grid.a_gas_star[c] = a_sum / k;
        }
        for (int i = 0; i < nf; ++i) {
            const auto& dmembers = grid.dust_members[i][c];
            const int li = static_cast<int>(dmembers.size());
            if (li == 0) continue;
            double u_sum = 0.0, t_sum = 0.0;
            for (int l : dmembers) {
                u_sum += dust[i].v[l];
                t_sum += dust[i].t_stop[l];
            }
            const auto idx = grid.at(c, i);
            grid.u_star[idx] = u_sum / li;
            grid.t_star[idx] = t_sum / li;
            grid.a_dust_star[idx] = dust_accel[i];
            if (k > 0)
                grid.eps_star[idx] = dust[i].mass * li / (gas.mass * k);
        }
    }
}

} // namespace dusty
