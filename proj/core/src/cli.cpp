#include "dusty/cli.hpp"

#include "dusty/config.hpp"
#include "dusty/errors.hpp"
#include "dusty/riemann.hpp"
#include "dusty/setup.hpp"
#include "dusty/snapshot.hpp"
#include "dusty/wave.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace dusty {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_probe(const std::string& spec) {
    if (spec.rfind("x=", 0) != 0)
        throw ConfigError("--probe expects x=VALUE");
    try {
        return std::stod(spec.substr(2));
    } catch (const std::exception&) {
        throw ConfigError("--probe expects x=VALUE");
    }
}

struct RunArgs {
    std::string preset_name, config_path, out_dir, probe, method;
    int snapshots = 10;
    bool compare_reference = false;
};

// Reference field values at the snapshot's particle positions, per phase.
struct ReferenceRows {
    std::vector<std::string> fields;          // field names for this phase
    std::vector<std::vector<double>> values;  // per field, per row
    std::vector<std::vector<double>> expect;
};

ReferenceRows reference_errors_gas(const Snapshot& snap, const RunPreset& rp,
                                   const WaveSolution* wave, const ShockReference* shock) {
    ReferenceRows out;
    const double mid = shock_init().diaphragm * rp.config.domain_length;
    const bool is_wave = wave != nullptr;
    out.fields = is_wave ? std::vector<std::string>{"rho", "v"}
                         : std::vector<std::string>{"rho", "v", "p", "e"};
    out.values.resize(out.fields.size());
    out.expect.resize(out.fields.size());
    for (const auto& row : snap.rows) {
        if (row.phase != 0) continue;
        if (is_wave) {
            out.values[0].push_back(row.rho);
            out.expect[0].push_back(wave->rho_g_at(row.x, snap.time));
            out.values[1].push_back(row.v);
            out.expect[1].push_back(wave->v_at(row.x, snap.time));
        } else {
            const ShockSample s = shock->at(row.x, mid, snap.time);
            out.values[0].push_back(row.rho);
            out.expect[0].push_back(s.rho);
            out.values[1].push_back(row.v);
            out.expect[1].push_back(s.v);
            out.values[2].push_back(row.p);
            out.expect[2].push_back(s.p);
            out.values[3].push_back(row.e);
            out.expect[3].push_back(s.e);
        }
    }
    return out;
}

ReferenceRows reference_errors_dust(const Snapshot& snap, const RunPreset& rp, int fraction,
                                    const WaveSolution* wave, const ShockReference* shock) {
    ReferenceRows out;
    const double mid = shock_init().diaphragm * rp.config.domain_length;
    out.fields = {"rho", "v"};
    out.values.resize(2);
    out.expect.resize(2);
    for (const auto& row : snap.rows) {
        if (row.phase != fraction + 1) continue;
        if (wave) {
            out.values[0].push_back(row.rho);
            out.expect[0].push_back(wave->rho_at(fraction, row.x, snap.time));
            out.values[1].push_back(row.v);
            out.expect[1].push_back(wave->u_at(fraction, row.x, snap.time));
        } else {
            // Stiff-limit reference: dust locked to gas.
            const ShockSample s = shock->at(row.x, mid, snap.time);
            out.values[0].push_back(row.rho);
            out.expect[0].push_back(rp.config.epsilon[fraction] * s.rho);
            out.values[1].push_back(row.v);
            out.expect[1].push_back(s.v);
        }
    }
    return out;
}

int cmd_run(const RunArgs& args) {
    if (args.preset_name.empty() == args.config_path.empty())
        throw ConfigError("run needs exactly one of --preset or --config");

    RunPreset rp;
    if (!args.preset_name.empty()) {
        rp = preset(args.preset_name);
    } else {
        rp.config = load_config_file(args.config_path);
        rp.name = std::filesystem::path(args.config_path).stem().string();
        rp.problem = rp.config.boundary == BoundaryMode::periodic_extended
                         ? Problem::dusty_wave
                         : Problem::dusty_shock;
    }
    if (!args.method.empty()) {
        if (args.method == "idic") rp.config.scheme = DragScheme::idic;
        else if (args.method == "mk") rp.config.scheme = DragScheme::mk;
        else throw ConfigError("--method must be idic or mk");
    }

    std::filesystem::create_directories(args.out_dir);

    std::optional<WaveSolution> wave;
    std::optional<ShockReference> shock;
    SimulationState state = [&] {
        if (rp.problem == Problem::dusty_wave) {
            wave = solve_wave(wave_params_for(rp));
            return setup_dustywave(rp, *wave);
        }
        return setup_dustyshock(rp);
    }();
    if (args.compare_reference && rp.problem == Problem::dusty_shock)
        shock = shock_reference_for(rp);

    RunOptions opts;
    opts.snapshots = args.snapshots;
    opts.audit_momentum = rp.config.scheme == DragScheme::idic;
    if (!args.probe.empty()) opts.probe_x = parse_probe(args.probe);

    std::ostringstream error_rows;
    const double length = rp.config.domain_length;
    const SnapshotFn writer = [&](const SimulationState& s, int index) {
        Snapshot snap = take_snapshot(s, 0.0, length);
        snap.index = index;
        write_snapshot_files(args.out_dir, rp.name, snap);
        if (!args.compare_reference) return;
        const WaveSolution* w = wave ? &*wave : nullptr;
        const ShockReference* sh = shock ? &*shock : nullptr;
        auto emit = [&](const std::string& phase, const ReferenceRows& r) {
            for (std::size_t f = 0; f < r.fields.size(); ++f) {
                if (r.values[f].empty()) continue;
                const FieldErrors e = error_metrics(r.values[f], r.expect[f]);
                error_rows << "error," << index << ',' << phase << ',' << r.fields[f]
                           << ',' << fmt(e.l1) << ',' << fmt(e.l2) << ',' << fmt(e.linf)
                           << '\n';
            }
        };
        emit("gas", reference_errors_gas(snap, rp, w, sh));
        for (int i = 0; i < rp.config.n_fractions; ++i)
            emit("dust_" + std::to_string(i + 1), reference_errors_dust(snap, rp, i, w, sh));
    };

    const RunResult result = run(state, opts, writer);

    if (opts.probe_x)
        write_probe_csv(args.out_dir + "/probe.csv", rp.name, result.probe);

    {
        std::ofstream out(args.out_dir + "/metrics.csv");
        out << "# preset=" << rp.name << ", columns=key,value\n";
        out << "steps," << result.metrics.steps << '\n';
        out << "max_cell_momentum_imbalance," << fmt(result.metrics.max_momentum_imbalance) << '\n';
        out << "min_courant_limit," << fmt(result.metrics.min_courant_limit) << '\n';
        out << "courant_exceeded," << (result.metrics.courant_exceeded ? 1 : 0) << '\n';
        out << error_rows.str();
    }
    {
        // Wall-clock timing is run-dependent, so it lives outside the
        // deterministic CSV outputs.
        std::ofstream out(args.out_dir + "/timing.txt");
        out << "wall_seconds_per_step " << result.metrics.wall_seconds_per_step << '\n';
    }
    return 0;
}

struct OracleArgs {
    std::string preset_name, out_dir;
    bool table = false;
    double time = -1.0;
    int samples = 1001;
};

int cmd_oracle_dustywave(const OracleArgs& args) {
    const RunPreset rp = preset(args.preset_name);
    const WaveSolution wave = solve_wave(wave_params_for(rp));
    std::filesystem::create_directories(args.out_dir);

    if (args.table) {
        std::ofstream out(args.out_dir + "/wave_coefficients.csv");
        out << "# preset=" << rp.name << ", amplitude=" << fmt(wave.params.amplitude)
            << ", omega=" << fmt(wave.omega.real()) << (wave.omega.imag() < 0 ? "" : "+")
            << fmt(wave.omega.imag()) << "i, columns=field,cos_coeff,sin_coeff\n";
        for (const auto& [field, c] : wave.coefficient_table())
            out << field << ',' << fmt(c.cos_coeff) << ',' << fmt(c.sin_coeff) << '\n';
    }

    const double t = args.time >= 0.0 ? args.time : rp.config.end_time;
    std::ofstream out(args.out_dir + "/wave_profile.csv");
    out << "# preset=" << rp.name << ", time=" << fmt(t) << ", columns=x,rho_g,v";
    for (int i = 0; i < rp.config.n_fractions; ++i)
        out << ",rho_" << i + 1 << ",u_" << i + 1;
    out << '\n';
    for (int s = 0; s < args.samples; ++s) {
        const double x = rp.config.domain_length * s / (args.samples - 1.0);
        const WaveField f = wave.at(x, t);
        out << fmt(x) << ',' << fmt(f.rho_g) << ',' << fmt(f.v);
        for (int i = 0; i < rp.config.n_fractions; ++i)
            out << ',' << fmt(f.rho[i]) << ',' << fmt(f.u[i]);
        out << '\n';
    }
    return 0;
}

int cmd_oracle_dustyshock(const OracleArgs& args) {
    const RunPreset rp = preset(args.preset_name);
    const ShockReference ref = shock_reference_for(rp);
    std::filesystem::create_directories(args.out_dir);

    const double t = args.time >= 0.0 ? args.time : rp.config.end_time;
    const double mid = shock_init().diaphragm * rp.config.domain_length;
    std::ofstream out(args.out_dir + "/shock_profile.csv");
    out << "# preset=" << rp.name << ", time=" << fmt(t)
        << ", sound_scale=" << fmt(ref.scale)
        << ", p_star=" << fmt(ref.p_star)
        << ", columns=x,rho_g,v,p,e,u_dust\n";
    for (int s = 0; s < args.samples; ++s) {
        const double x = rp.config.domain_length * s / (args.samples - 1.0);
        const ShockSample f = ref.at(x, mid, t);
        out << fmt(x) << ',' << fmt(f.rho) << ',' << fmt(f.v) << ',' << fmt(f.p)
            << ',' << fmt(f.e) << ',' << fmt(f.v) << '\n';
    }
    return 0;
}

struct BenchArgs {
    std::string n_list = "8,16,32,64,128";
    std::string out_dir;
    int cells = 256;
    int repeats = 25;
};

int cmd_bench_drag(const BenchArgs& args) {
    std::vector<int> ns;
    std::stringstream ss(args.n_list);
    std::string item;
    while (std::getline(ss, item, ','))
        ns.push_back(std::stoi(item));
    if (ns.size() < 2) throw ConfigError("bench-drag needs at least two fraction counts");

    const std::vector<double> nanos = drag_solve_timing(ns, args.cells, args.repeats);
    std::vector<double> n_real(ns.begin(), ns.end());
    const double exponent = fit_power_law_exponent(n_real, nanos);

    std::printf("n_fractions,ns_per_cell_solve\n");
    for (std::size_t i = 0; i < ns.size(); ++i)
        std::printf("%d,%.1f\n", ns[i], nanos[i]);
    std::printf("fitted_exponent,%.3f\n", exponent);

    if (!args.out_dir.empty()) {
        std::filesystem::create_directories(args.out_dir);
        std::ofstream out(args.out_dir + "/bench_drag.csv");
        out << "# columns=n_fractions,ns_per_cell_solve\n";
        for (std::size_t i = 0; i < ns.size(); ++i)
            out << ns[i] << ',' << nanos[i] << '\n';
        out << "# fitted_exponent=" << exponent << '\n';
    }
    return 0;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"1D two-fluid SPH for gas with polydisperse dust"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run a preset or a config file");
    run_cmd->add_option("--preset", run_args.preset_name, "Published run name (DW1..DS9)");
    run_cmd->add_option("--config", run_args.config_path, "Path to a key=value config file");
    run_cmd->add_option("--out", run_args.out_dir, "Output directory")->required();
    run_cmd->add_option("--snapshots", run_args.snapshots, "Snapshot count (default 10)");
    run_cmd->add_flag("--compare-reference", run_args.compare_reference,
                      "Write error metrics against the reference solution");
    run_cmd->add_option("--probe", run_args.probe, "Record a time series, e.g. x=0");
    run_cmd->add_option("--method", run_args.method, "Override drag scheme: idic or mk");

    auto* oracle_cmd = app.add_subcommand("oracle", "Evaluate a reference solution");
    oracle_cmd->require_subcommand(1);
    OracleArgs wave_args, shock_args;
    auto* wave_cmd = oracle_cmd->add_subcommand("dustywave", "Linearized sound-wave oracle");
    wave_cmd->add_option("--preset", wave_args.preset_name, "DW preset")->required();
    wave_cmd->add_option("--out", wave_args.out_dir, "Output directory")->required();
    wave_cmd->add_flag("--table", wave_args.table, "Write the initial-perturbation table");
    wave_cmd->add_option("--time", wave_args.time, "Sample time (default: preset end time)");
    wave_cmd->add_option("--samples", wave_args.samples, "Profile sample count");
    auto* shock_cmd = oracle_cmd->add_subcommand("dustyshock", "Scaled shock-tube oracle");
    shock_cmd->add_option("--preset", shock_args.preset_name, "DS preset")->required();
    shock_cmd->add_option("--out", shock_args.out_dir, "Output directory")->required();
    shock_cmd->add_option("--time", shock_args.time, "Sample time (default: preset end time)");
    shock_cmd->add_option("--samples", shock_args.samples, "Profile sample count");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench-drag", "Time the cell drag solve vs N");
    bench_cmd->add_option("--n", bench_args.n_list, "Fraction counts, e.g. 8,16,32,64,128");
    bench_cmd->add_option("--cells", bench_args.cells, "Cells per synthetic grid");
    bench_cmd->add_option("--repeats", bench_args.repeats, "Timing repetitions");
    bench_cmd->add_option("--out", bench_args.out_dir, "Optional output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_args);
        if (wave_cmd->parsed()) return cmd_oracle_dustywave(wave_args);
        if (shock_cmd->parsed()) return cmd_oracle_dustyshock(shock_args);
        if (bench_cmd->parsed()) return cmd_bench_drag(bench_args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const OracleError& e) {
        std::cerr << "oracle error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int run_command(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"dusty1d"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace dusty
