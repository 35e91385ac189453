#include "dusty/config.hpp"
#include "dusty/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dusty {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (trim(value.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': cannot parse number from '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list element");
        out.push_back(parse_double(key, item));
    }
    return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

void require_positive(const char* name, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
}

} // namespace

void SimConfig::validate() {
    require_positive("domain_length", domain_length);
    require_positive("end_time", end_time);
    require_positive("timestep", timestep);
    require_positive("smoothing_length", smoothing_length);
    if (cell_size == 0.0) cell_size = 0.5 * smoothing_length;
    require_positive("cell_size", cell_size);
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0, 1]");
    if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
    require_positive("sound_speed", sound_speed);

    if (visc_alpha < 0.0 || visc_beta < 0.0)
        throw ConfigError("viscosity coefficients must be non-negative");
    if (visc_limiter == 0.0) visc_limiter = 0.1 * smoothing_length;
    require_positive("visc_limiter", visc_limiter);

    if (n_fractions < 0) throw ConfigError("n_fractions must be non-negative");
    const auto nf = static_cast<std::size_t>(n_fractions);
    if (epsilon.size() != nf)
        throw ConfigError("epsilon list must have one entry per dust fraction");
    for (double eps : epsilon)
        if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");

    if (drag_mode == DragMode::fixed_stopping_time) {
        if (stopping_times.size() != nf)
            throw ConfigError("stopping_times list must have one entry per dust fraction");
        if (!grain_sizes.empty())
            throw ConfigError("grain_sizes must be absent in fixed-stopping-time mode");
        for (double t : stopping_times)
            if (!(t > 0.0)) throw ConfigError("stopping_times must be positive");
    } else {
        if (grain_sizes.size() != nf)
            throw ConfigError("grain_sizes list must have one entry per dust fraction");
        if (!stopping_times.empty())
            throw ConfigError("stopping_times must be absent in epstein mode");
        for (double s : grain_sizes)
            if (!(s > 0.0)) throw ConfigError("grain_sizes must be positive");
        require_positive("grain_density", grain_density);
    }

    if (n_sph < 1) throw ConfigError("n_sph must be at least 1");

    if (external_accel_dust.empty()) external_accel_dust.assign(nf, 0.0);
    if (external_accel_dust.size() != nf)
        throw ConfigError("external_accel_dust list must have one entry per dust fraction");
}

SimConfig load_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;  // section header
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("duplicate key '" + key + "'");
        kv[key] = value;
    }

    SimConfig cfg;
    auto take = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::string();
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto require = [&take](const std::string& key) {
        std::string v = take(key);
        if (v.empty()) throw ConfigError("missing key: " + key);
        return v;
    };

    cfg.domain_length = parse_double("domain_length", require("domain_length"));
    cfg.end_time = parse_double("end_time", require("end_time"));
    cfg.timestep = parse_double("timestep", require("timestep"));
    cfg.smoothing_length = parse_double("smoothing_length", require("smoothing_length"));
    if (auto v = take("cell_size"); !v.empty()) cfg.cell_size = parse_double("cell_size", v);
    if (auto v = take("cfl"); !v.empty()) cfg.cfl = parse_double("cfl", v);

    const std::string eos = require("eos");
    if (eos == "isothermal") cfg.eos = EosMode::isothermal;
    else if (eos == "adiabatic") cfg.eos = EosMode::adiabatic;
    else throw ConfigError("eos must be 'isothermal' or 'adiabatic'");
    if (auto v = take("gamma"); !v.empty()) cfg.gamma = parse_double("gamma", v);
    if (auto v = take("sound_speed"); !v.empty()) cfg.sound_speed = parse_double("sound_speed", v);

    if (auto v = take("viscosity"); !v.empty()) cfg.viscosity = parse_flag("viscosity", v);
    if (auto v = take("visc_alpha"); !v.empty()) cfg.visc_alpha = parse_double("visc_alpha", v);
    if (auto v = take("visc_beta"); !v.empty()) cfg.visc_beta = parse_double("visc_beta", v);
    if (auto v = take("visc_limiter"); !v.empty()) cfg.visc_limiter = parse_double("visc_limiter", v);

    cfg.n_fractions = static_cast<int>(parse_double("n_fractions", require("n_fractions")));
    const std::string mode = require("drag_mode");
    if (mode == "fixed") cfg.drag_mode = DragMode::fixed_stopping_time;
    else if (mode == "epstein") cfg.drag_mode = DragMode::epstein;
    else throw ConfigError("drag_mode must be 'fixed' or 'epstein'");
    if (auto v = take("stopping_times"); !v.empty()) cfg.stopping_times = parse_list("stopping_times", v);
    if (auto v = take("grain_sizes"); !v.empty()) cfg.grain_sizes = parse_list("grain_sizes", v);
    if (auto v = take("grain_density"); !v.empty()) cfg.grain_density = parse_double("grain_density", v);
    cfg.epsilon = parse_list("epsilon", require("epsilon"));

    cfg.n_sph = static_cast<int>(parse_double("n_sph", require("n_sph")));
    const std::string boundary = require("boundary");
    if (boundary == "periodic_extended") cfg.boundary = BoundaryMode::periodic_extended;
    else if (boundary == "fixed_ghost") cfg.boundary = BoundaryMode::fixed_ghost;
    else throw ConfigError("boundary must be 'periodic_extended' or 'fixed_ghost'");

    if (auto v = take("method"); !v.empty()) {
        if (v == "idic") cfg.scheme = DragScheme::idic;
        else if (v == "mk") cfg.scheme = DragScheme::mk;
        else throw ConfigError("method must be 'idic' or 'mk'");
    }

    if (auto v = take("external_accel_gas"); !v.empty())
        cfg.external_accel_gas = parse_double("external_accel_gas", v);
    if (auto v = take("external_accel_dust"); !v.empty())
        cfg.external_accel_dust = parse_list("external_accel_dust", v);

    if (!kv.empty()) throw ConfigError("unknown key '" + kv.begin()->first + "'");

    cfg.validate();
    return cfg;
}

SimConfig load_config_string(const std::string& text) {
    std::istringstream in(text);
    return load_config(in);
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return load_config(in);
}

std::string serialize_config(const SimConfig& cfg) {
    std::ostringstream out;
    out << "[domain]\n";
    out << "domain_length = " << fmt(cfg.domain_length) << "\n";
    out << "end_time = " << fmt(cfg.end_time) << "\n";
    out << "timestep = " << fmt(cfg.timestep) << "\n";
    out << "smoothing_length = " << fmt(cfg.smoothing_length) << "\n";
    out << "cell_size = " << fmt(cfg.cell_size) << "\n";
    out << "cfl = " << fmt(cfg.cfl) << "\n";
    out << "\n[gas]\n";
    out << "eos = " << (cfg.eos == EosMode::isothermal ? "isothermal" : "adiabatic") << "\n";
    out << "gamma = " << fmt(cfg.gamma) << "\n";
    out << "sound_speed = " << fmt(cfg.sound_speed) << "\n";
    out << "\n[viscosity]\n";
    out << "viscosity = " << (cfg.viscosity ? "on" : "off") << "\n";
    out << "visc_alpha = " << fmt(cfg.visc_alpha) << "\n";
    out << "visc_beta = " << fmt(cfg.visc_beta) << "\n";
    out << "visc_limiter = " << fmt(cfg.visc_limiter) << "\n";
    out << "\n[dust]\n";
    out << "n_fractions = " << cfg.n_fractions << "\n";
    out << "drag_mode = " << (cfg.drag_mode == DragMode::fixed_stopping_time ? "fixed" : "epstein") << "\n";
    if (!cfg.stopping_times.empty())
        out << "stopping_times = " << fmt_list(cfg.stopping_times) << "\n";
    if (!cfg.grain_sizes.empty())
        out << "grain_sizes = " << fmt_list(cfg.grain_sizes) << "\n";
    out << "grain_density = " << fmt(cfg.grain_density) << "\n";
    out << "epsilon = " << fmt_list(cfg.epsilon) << "\n";
    out << "\n[run]\n";
    out << "n_sph = " << cfg.n_sph << "\n";
    out << "boundary = "
        << (cfg.boundary == BoundaryMode::periodic_extended ? "periodic_extended" : "fixed_ghost")
        << "\n";
    out << "method = " << (cfg.scheme == DragScheme::idic ? "idic" : "mk") << "\n";
    out << "external_accel_gas = " << fmt(cfg.external_accel_gas) << "\n";
    out << "external_accel_dust = " << fmt_list(cfg.external_accel_dust) << "\n";
    return out.str();
}

WaveInit wave_init() { return WaveInit{}; }
ShockInit shock_init() { return ShockInit{}; }

namespace {

SimConfig wave_base() {
    SimConfig cfg;
    cfg.domain_length = 1.0;
    cfg.end_time = 2.0;
    cfg.eos = EosMode::isothermal;
    cfg.gamma = 1.4;
    cfg.sound_speed = 1.0;
    cfg.viscosity = false;  // all wave runs are inviscid
    cfg.n_fractions = 3;
    cfg.drag_mode = DragMode::fixed_stopping_time;
    cfg.epsilon = {0.3333, 0.3333, 0.3333};
    cfg.boundary = BoundaryMode::periodic_extended;
    cfg.scheme = DragScheme::idic;
    cfg.cfl = 0.5;
    return cfg;
}

SimConfig shock_base() {
    SimConfig cfg;
    cfg.domain_length = 1.0;
    cfg.end_time = 0.2;
    cfg.eos = EosMode::adiabatic;
    cfg.gamma = 1.4;
    cfg.sound_speed = 1.0;
    cfg.viscosity = true;
    cfg.visc_alpha = 1.0;
    cfg.visc_beta = 2.0;
    cfg.drag_mode = DragMode::epstein;
    cfg.grain_density = 1.0;
    cfg.boundary = BoundaryMode::fixed_ghost;
    cfg.scheme = DragScheme::idic;
    cfg.cfl = 0.5;
    return cfg;
}

} // namespace

RunPreset preset(const std::string& name) {
    RunPreset rp;
    rp.name = name;
    SimConfig cfg;

    if (name == "DW1" || name == "DW2" || name == "DW3") {
        rp.problem = Problem::dusty_wave;
        cfg = wave_base();
        cfg.stopping_times =
            (name == "DW1") ? std::vector<double>{0.1, 0.2, 0.4}
                            : std::vector<double>{1e-2, 1e-3, 1e-4};
        if (name == "DW3") {
            cfg.n_sph = 30;
            cfg.smoothing_length = 0.1;
        } else {
            cfg.n_sph = 600;
            cfg.smoothing_length = 0.01;
        }
        cfg.timestep = 5e-3;
    } else if (name.size() == 3 && name[0] == 'D' && name[1] == 'S' &&
               name[2] >= '1' && name[2] <= '9') {
        rp.problem = Problem::dusty_shock;
        cfg = shock_base();
        switch (name[2]) {
            case '1':
            case '2':
                cfg.n_fractions = 1;
                cfg.grain_sizes = {1e-4};
                cfg.epsilon = {1.0};
                cfg.n_sph = 2100;
                cfg.smoothing_length = 0.01;
                cfg.timestep = (name[2] == '1') ? 5e-3 : 5e-5;
                cfg.scheme = (name[2] == '1') ? DragScheme::idic : DragScheme::mk;
                break;
            case '3':
            case '4':
                cfg.n_fractions = 1;
                cfg.grain_sizes = {1e-4};
                cfg.epsilon = {1.0};
                cfg.n_sph = 21000;
                cfg.smoothing_length = 0.001;
                cfg.timestep = (name[2] == '3') ? 5e-4 : 5e-5;
                cfg.scheme = (name[2] == '3') ? DragScheme::idic : DragScheme::mk;
                break;
            case '5':
            case '6':
                cfg.n_fractions = 2;
                cfg.grain_sizes = {1e-3, 1e-4};
                cfg.epsilon = (name[2] == '5') ? std::vector<double>{0.01, 0.99}
                                               : std::vector<double>{0.5, 0.5};
                cfg.n_sph = 1180;
                cfg.smoothing_length = 0.01;
                cfg.timestep = 5e-3;
                break;
            case '7':
                cfg.n_fractions = 3;
                cfg.grain_sizes = {1e-3, 1e-2, 1e-1};
                cfg.epsilon = {0.3333, 0.3333, 0.3333};
                cfg.n_sph = 1180;
                cfg.smoothing_length = 0.02;
                cfg.timestep = 5e-3;
                break;
            case '8':
                cfg.n_fractions = 3;
                cfg.grain_sizes = {1e-3, 1e-2, 1e-1};
                cfg.epsilon = {0.3333, 0.3333, 0.3333};
                cfg.n_sph = 2360;
                cfg.smoothing_length = 0.01;
                cfg.timestep = 2.5e-3;
                break;
            case '9':
                cfg.n_fractions = 3;
                cfg.grain_sizes = {1e-3, 1e-2, 1e-1};
                cfg.epsilon = {0.3333, 0.3333, 0.3333};
                cfg.n_sph = 7086;
                cfg.smoothing_length = 0.005;
                cfg.timestep = 1.25e-3;
                break;
        }
    } else {
        throw ConfigError("unknown preset name: " + name);
    }

    cfg.validate();
    rp.config = cfg;
    return rp;
}

std::vector<std::string> preset_names() {
    return {"DW1", "DW2", "DW3", "DS1", "DS2", "DS3",
            "DS4", "DS5", "DS6", "DS7", "DS8", "DS9"};
}

} // namespace dusty
