#include "dusty/snapshot.hpp"

#include "dusty/drag.hpp"
#include "dusty/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace dusty {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_phase(std::vector<SnapshotRow>& rows, const ParticleSet& set,
                  int phase, double lo, double hi) {
    for (int idx : set.order) {
        if (static_cast<std::size_t>(idx) >= set.n_active) continue;
        const double x = set.x[idx];
        if (x < lo || x > hi) continue;
        SnapshotRow row;
        row.phase = phase;
        row.x = x;
        row.rho = set.rho[idx];
        row.v = set.v[idx];
        if (set.is_gas()) {
            row.e = set.e[idx];
            row.p = set.p[idx];
        } else {
            row.t_stop = set.t_stop[idx];
        }
        rows.push_back(row);
    }
}

} // namespace

Snapshot take_snapshot(const SimulationState& state, double lo, double hi) {
    Snapshot snap;
    snap.time = state.time;
    append_phase(snap.rows, state.gas, 0, lo, hi);
    for (std::size_t i = 0; i < state.dust.size(); ++i)
        append_phase(snap.rows, state.dust[i], static_cast<int>(i) + 1, lo, hi);
    return snap;
}

void write_snapshot_files(const std::string& dir, const std::string& run_name,
                          const Snapshot& snapshot) {
    std::size_t i = 0;
    while (i < snapshot.rows.size()) {
        const int phase = snapshot.rows[i].phase;
        std::size_t j = i;
        while (j < snapshot.rows.size() && snapshot.rows[j].phase == phase) ++j;

        char name[64];
        if (phase == 0)
            std::snprintf(name, sizeof name, "snapshot_%03d_gas.csv", snapshot.index);
        else
            std::snprintf(name, sizeof name, "snapshot_%03d_dust_%d.csv", snapshot.index, phase);
        const std::string path = dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw SimulationError("cannot write " + path);
        out << "# time=" << fmt(snapshot.time) << ", preset=" << run_name
            << ", columns=phase,x,rho,v,e,p,t_stop\n";
        for (std::size_t r = i; r < j; ++r) {
            const SnapshotRow& row = snapshot.rows[r];
            out << row.phase << ',' << fmt(row.x) << ',' << fmt(row.rho) << ','
                << fmt(row.v) << ',' << fmt(row.e) << ',' << fmt(row.p) << ','
                << fmt(row.t_stop) << '\n';
        }
        i = j;
    }
}

void write_probe_csv(const std::string& path, const std::string& run_name,
                     std::span<const ProbeSample> probe) {
    std::ofstream out(path);
    if (!out) throw SimulationError("cannot write " + path);
    out << "# preset=" << run_name << ", columns=t,rho_g,v";
    if (!probe.empty())
        for (std::size_t i = 0; i < probe.front().rho.size(); ++i)
            out << ",rho_" << i + 1 << ",u_" << i + 1;
    out << '\n';
    for (const auto& s : probe) {
        out << fmt(s.time) << ',' << fmt(s.rho_g) << ',' << fmt(s.v);
        for (std::size_t i = 0; i < s.rho.size(); ++i)
            out << ',' << fmt(s.rho[i]) << ',' << fmt(s.u[i]);
        out << '\n';
    }
}

FieldErrors error_metrics(std::span<const double> values,
                          std::span<const double> reference) {
    if (values.empty() || values.size() != reference.size())
        throw SimulationError("error metrics need matching non-empty samples");
    FieldErrors err;
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = std::abs(values[i] - reference[i]);
        sum1 += d;
        sum2 += d * d;
        err.linf = std::max(err.linf, d);
    }
    err.l1 = sum1 / values.size();
    err.l2 = std::sqrt(sum2 / values.size());
    return err;
}

double fit_power_law_exponent(std::span<const double> n,
                              std::span<const double> seconds) {
    if (n.size() < 2 || n.size() != seconds.size())
        throw SimulationError("power-law fit needs at least two matched points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]);
        const double y = std::log(seconds[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(n.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> drag_solve_timing(std::span<const int> fraction_counts,
                                      int cells_per_grid, int repeats) {
    std::vector<double> out;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    std::uniform_real_distribution<double> eps(0.1, 2.0);
    std::uniform_real_distribution<double> t_log(-4.0, 1.0);

    for (int nf : fraction_counts) {
        CellGrid grid;
        grid.layout = CellLayout{0.0, 1.0, cells_per_grid};
        grid.n_fractions = nf;
        grid.gas_members.assign(cells_per_grid, {0});
        grid.dust_members.assign(nf, std::vector<std::vector<int>>(cells_per_grid, {0}));
        const std::size_t total = static_cast<std::size_t>(cells_per_grid) * nf;
        grid.v_star.resize(cells_per_grid);
        grid.a_gas_star.resize(cells_per_grid);
        grid.u_star.resize(total);
        grid.t_star.resize(total);
        grid.eps_star.resize(total);
        grid.a_dust_star.assign(total, 0.0);
        for (int c = 0; c < cells_per_grid; ++c) {
            grid.v_star[c] = vel(rng);
            grid.a_gas_star[c] = vel(rng);
            for (int i = 0; i < nf; ++i) {
                grid.u_star[grid.at(c, i)] = vel(rng);
                grid.t_star[grid.at(c, i)] = std::pow(10.0, t_log(rng));
                grid.eps_star[grid.at(c, i)] = eps(rng);
            }
        }

        std::vector<double> samples;
        double sink = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const CellDragSolution sol = solve_cell_velocities(grid, 5e-3);
            const auto t1 = std::chrono::steady_clock::now();
            sink += sol.v_new[0];
            samples.push_back(std::chrono::duration<double>(t1 - t0).count() /
                              cells_per_grid);
        }
        volatile double guard = sink;  // keep the solves from being elided
        (void)guard;
        std::sort(samples.begin(), samples.end());
        out.push_back(samples[samples.size() / 2] * 1e9);
    }
    return out;
}

} // namespace dusty
