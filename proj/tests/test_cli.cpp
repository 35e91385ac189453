/// Command-line front end: flags, exit codes, output files, determinism,
/// and the error-metric helpers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dusty/cli.hpp"
#include "dusty/config.hpp"
#include "dusty/errors.hpp"
#include "dusty/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dusty;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dusty1d_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("error_metrics") {
    SUBCASE("identical inputs give zero errors") {
        const std::vector<double> a{1.0, 2.0, 3.0};
        const FieldErrors e = error_metrics(a, a);
        CHECK(e.l1 == 0.0);
        CHECK(e.l2 == 0.0);
        CHECK(e.linf == 0.0);
    }
    SUBCASE("constant offset shows up identically in all norms") {
        const std::vector<double> a{1.0, 2.0, 3.0};
        const std::vector<double> b{1.5, 2.5, 3.5};
        const FieldErrors e = error_metrics(a, b);
        CHECK(e.l1 == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(e.l2 == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(e.linf == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("empty region is rejected") {
        CHECK_THROWS_AS(error_metrics({}, {}), SimulationError);
    }
}

TEST_CASE("power-law fit recovers a known exponent") {
    const std::vector<double> n{8, 16, 32, 64, 128};
    std::vector<double> t;
    for (double ni : n) t.push_back(3.0 * ni * ni);
    CHECK(fit_power_law_exponent(n, t) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cli usage errors exit with code 1") {
    CHECK(run_command({"run"}) == 1);                                   // no --out
    CHECK(run_command({"run", "--out", "/tmp/x", "--preset", "nope"}) == 1);
    CHECK(run_command({"run", "--out", "/tmp/x"}) == 1);                // no source
    CHECK(run_command({"frobnicate"}) == 1);
    CHECK(run_command({"run", "--out", "/tmp/x", "--preset", "DW3", "--config", "y"}) == 1);
    CHECK(run_command({"oracle", "dustywave", "--out", "/tmp/x", "--preset", "DS1"}) == 3);
}

TEST_CASE("oracle subcommands write coefficient tables and profiles") {
    const fs::path dir = fresh_dir("oracle");
    CHECK(run_command({"oracle", "dustywave", "--preset", "DW2", "--table",
                       "--samples", "11", "--out", dir.string()}) == 0);
    const std::string table = slurp(dir / "wave_coefficients.csv");
    CHECK(table.find("v,-0.707212") != std::string::npos);
    CHECK(table.find("rho_1,0.3327036") != std::string::npos);
    CHECK(slurp(dir / "wave_profile.csv").find("# preset=DW2") == 0);

    CHECK(run_command({"oracle", "dustyshock", "--preset", "DS1", "--samples", "11",
                       "--out", dir.string()}) == 0);
    const std::string shock = slurp(dir / "shock_profile.csv");
    CHECK(shock.find("p_star=0.3031301") != std::string::npos);
}

TEST_CASE("run subcommand writes snapshots, metrics, and a probe") {
    const fs::path dir = fresh_dir("run_dw3");
    CHECK(run_command({"run", "--preset", "DW3", "--out", dir.string(), "--snapshots",
                       "2", "--probe", "x=0", "--compare-reference"}) == 0);

    CHECK(fs::exists(dir / "snapshot_000_gas.csv"));
    CHECK(fs::exists(dir / "snapshot_002_gas.csv"));
    CHECK(fs::exists(dir / "snapshot_002_dust_3.csv"));
    CHECK(fs::exists(dir / "probe.csv"));
    CHECK(fs::exists(dir / "timing.txt"));

    const std::string metrics = slurp(dir / "metrics.csv");
    CHECK(metrics.find("steps,400") != std::string::npos);
    CHECK(metrics.find("error,2,gas,v,") != std::string::npos);
    CHECK(metrics.find("courant_exceeded,0") != std::string::npos);

    // Snapshot rows stay inside the reported region and keep the header.
    const std::string snap = slurp(dir / "snapshot_002_gas.csv");
    CHECK(snap.find("# time=") == 0);
    CHECK(snap.find("columns=phase,x,rho,v,e,p,t_stop") != std::string::npos);

    SUBCASE("snapshot mass bookkeeping: row count is stable across snapshots") {
        auto count_rows = [&](const fs::path& p) {
            std::istringstream in(slurp(p));
            std::string line;
            int rows = 0;
            while (std::getline(in, line))
                if (!line.empty() && line[0] != '#') ++rows;
            return rows;
        };
        const int n0 = count_rows(dir / "snapshot_000_gas.csv");
        const int n2 = count_rows(dir / "snapshot_002_gas.csv");
        CHECK(n0 == 30);
        CHECK(n0 == n2);
    }
}

TEST_CASE("identical invocations produce byte-identical CSV output") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    for (const auto& dir : {a, b})
        REQUIRE(run_command({"run", "--preset", "DW3", "--out", dir.string(),
                             "--snapshots", "2", "--probe", "x=0",
                             "--compare-reference"}) == 0);
    for (const auto& name :
         {"snapshot_002_gas.csv", "snapshot_002_dust_1.csv", "probe.csv", "metrics.csv"})
        CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("config-file runs and the method override") {
    const fs::path dir = fresh_dir("config_run");
    RunPreset rp = preset("DW3");
    rp.config.end_time = 0.05;
    const fs::path cfg_path = dir / "tiny_wave.cfg";
    {
        std::ofstream out(cfg_path);
        out << serialize_config(rp.config);
    }
    CHECK(run_command({"run", "--config", cfg_path.string(), "--out",
                       (dir / "out").string(), "--snapshots", "1"}) == 0);
    const std::string metrics = slurp(dir / "out" / "metrics.csv");
    CHECK(metrics.find("# preset=tiny_wave") == 0);
    CHECK(metrics.find("steps,10") != std::string::npos);

    // MK override is rejected for a 3-fraction run (scheme needs N = 1).
    CHECK(run_command({"run", "--config", cfg_path.string(), "--out",
                       (dir / "out2").string(), "--method", "mk"}) == 2);
}

TEST_CASE("bench-drag prints a timing table") {
    const fs::path dir = fresh_dir("bench");
    CHECK(run_command({"bench-drag", "--n", "4,8,16", "--cells", "16", "--repeats", "3",
                       "--out", dir.string()}) == 0);
    const std::string csv = slurp(dir / "bench_drag.csv");
    CHECK(csv.find("# columns=n_fractions") == 0);
    CHECK(csv.find("# fitted_exponent=") != std::string::npos);
}
