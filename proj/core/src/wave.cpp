#include "dusty/wave.hpp"

#include "dusty/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dusty {

namespace {

constexpr int kMaxBisection = 200;
constexpr double kRelTol = 1e-13;

double F_real(double w, double omega_s, std::span<const double> eps,
              std::span<const double> t) {
    double sum = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) sum += eps[j] / (1.0 - w * t[j]);
    return w * w * sum + omega_s * omega_s;
}

// poly *= (1 - t w), ascending powers
void mul_linear(std::vector<double>& poly, double t) {
    poly.push_back(0.0);
    for (std::size_t m = poly.size() - 1; m >= 1; --m) poly[m] -= t * poly[m - 1];
}

} // namespace

std::complex<double> dispersion_F(std::complex<double> omega, double omega_s,
                                  std::span<const double> epsilon,
                                  std::span<const double> t_stop) {
    std::complex<double> sum = 1.0;
    for (std::size_t j = 0; j < t_stop.size(); ++j) {
        const std::complex<double> d = 1.0 - omega * t_stop[j];
        if (d == 0.0)
            throw OracleError("dispersion function evaluated at singular point 1/t_j");
        sum += epsilon[j] / d;
    }
    return omega * omega * sum + omega_s * omega_s;
}

std::vector<double> dispersion_poly_coeffs(double omega_s,
                                           std::span<const double> epsilon,
                                           std::span<const double> t_stop) {
    const std::size_t n = t_stop.size();
    std::vector<double> prod_all{1.0};
    for (double t : t_stop) mul_linear(prod_all, t);

    // prod_all + sum_j eps_j prod_{p != j}, degree N
    std::vector<double> bracket = prod_all;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> part{epsilon[j]};
        for (std::size_t p = 0; p < n; ++p)
            if (p != j) mul_linear(part, t_stop[p]);
        for (std::size_t m = 0; m < part.size(); ++m) bracket[m] += part[m];
    }

    // omega^2 * bracket + omega_s^2 * prod_all
    std::vector<double> coeffs(n + 3, 0.0);
    for (std::size_t m = 0; m < bracket.size(); ++m) coeffs[m + 2] += bracket[m];
    for (std::size_t m = 0; m < prod_all.size(); ++m)
        coeffs[m] += omega_s * omega_s * prod_all[m];
    return coeffs;
}

std::complex<double> dispersion_poly(std::complex<double> omega, double omega_s,
                                     std::span<const double> epsilon,
                                     std::span<const double> t_stop) {
    const auto c = dispersion_poly_coeffs(omega_s, epsilon, t_stop);
    std::complex<double> acc = 0.0;
    for (std::size_t m = c.size(); m-- > 0;) acc = acc * omega + c[m];
    return acc;
}

double dispersion_residual(std::complex<double> omega, double omega_s,
                           std::span<const double> epsilon,
                           std::span<const double> t_stop) {
    std::complex<double> sum = 1.0;
    double scale = 1.0;
    for (std::size_t j = 0; j < t_stop.size(); ++j) {
        const std::complex<double> term = epsilon[j] / (1.0 - omega * t_stop[j]);
        sum += term;
        scale += std::abs(term);
    }
    const double w2 = std::norm(omega);
    return std::abs(omega * omega * sum + omega_s * omega_s) /
           (w2 * scale + omega_s * omega_s);
}

std::vector<double> find_real_roots(std::span<const double> epsilon,
                                    std::span<const double> t_stop,
                                    double omega_s) {
    const std::size_t n = t_stop.size();
    if (n == 0) return {};

    std::vector<double> sing(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(t_stop[j] > 0.0)) throw OracleError("stopping times must be positive");
        sing[j] = 1.0 / t_stop[j];
    }
    std::sort(sing.begin(), sing.end());
    for (std::size_t j = 1; j < n; ++j)
        if (sing[j] - sing[j - 1] <= 1e-12 * sing[j])
            throw OracleError("nearly coincident stopping times: root interlacing degenerates");

    auto F = [&](double w) { return F_real(w, omega_s, epsilon, t_stop); };

    std::vector<std::pair<double, double>> brackets;
    const double nudge = 1e-12;
    for (std::size_t j = 0; j + 1 < n; ++j)
        brackets.emplace_back(sing[j] * (1.0 + nudge), sing[j + 1] * (1.0 - nudge));
    // expand beyond the largest singular point until F turns positive
    {
        const double a = sing[n - 1] * (1.0 + nudge);
        double b = sing[n - 1] * 2.0;
        int tries = 0;
        while (F(b) < 0.0) {
            b *= 2.0;
            if (++tries > 600) throw OracleError("could not bracket the outer dispersion root");
        }
        brackets.emplace_back(a, b);
    }

    std::vector<double> roots;
    for (auto [a, b] : brackets) {
        double fa = F(a), fb = F(b);
        if (fa == 0.0) { roots.push_back(a); continue; }
        if (fb == 0.0) { roots.push_back(b); continue; }
        if (fa * fb > 0.0)
            throw OracleError("dispersion root bracket has no sign change");
        for (int it = 0; it < kMaxBisection && b - a > kRelTol * std::abs(a); ++it) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;  // interval below representable width
            const double fm = F(m);
            if (fm == 0.0) { a = b = m; break; }
            if (fa * fm < 0.0) {
                b = m; fb = fm;
            } else {
                a = m; fa = fm;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::complex<double> complex_pair(std::span<const double> real_roots,
                                  std::span<const double> epsilon,
                                  std::span<const double> t_stop,
                                  double omega_s) {
    const std::size_t n = t_stop.size();
    if (real_roots.size() != n)
        throw OracleError("complex_pair needs all real dispersion roots");
    if (n == 0) return {0.0, -omega_s};

    // Product of the pair: omega_s^2 * prod_j 1/(t_j omega_j), one factor at
    // a time to keep intermediates well scaled.
    double prod = omega_s * omega_s;
    for (std::size_t j = 0; j < n; ++j) prod /= t_stop[j] * real_roots[j];

    // Sum of the pair: -a_{N+1} - sum of real roots.
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += (1.0 + epsilon[j]) / t_stop[j];
    for (double r : real_roots) sum -= r;

    const double disc = sum * sum - 4.0 * prod;
    if (disc >= 0.0)
        throw OracleError("dispersion pair is not complex for these parameters");
    return {0.5 * sum, -0.5 * std::sqrt(-disc)};
}

namespace {

std::complex<double> mode_phase(const WaveParams& params, std::complex<double> omega,
                                double x, double time) {
    return std::exp(std::complex<double>(0.0, params.wavenumber * x) - omega * time);
}

} // namespace

WaveField WaveSolution::at(double x, double time) const {
    const std::complex<double> phase = mode_phase(params, omega, x, time);
    WaveField f;
    f.rho_g = params.rho_gas + (rho_g_hat * phase).real();
    f.v = (v_hat * phase).real();
    const std::size_t n = params.t_stop.size();
    f.rho.resize(n);
    f.u.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        f.rho[j] = params.epsilon[j] * params.rho_gas + (rho_hat[j] * phase).real();
        f.u[j] = (u_hat[j] * phase).real();
    }
    return f;
}

double WaveSolution::rho_g_at(double x, double time) const {
    return params.rho_gas + (rho_g_hat * mode_phase(params, omega, x, time)).real();
}

double WaveSolution::v_at(double x, double time) const {
    return (v_hat * mode_phase(params, omega, x, time)).real();
}

double WaveSolution::rho_at(int fraction, double x, double time) const {
    return params.epsilon[fraction] * params.rho_gas +
           (rho_hat[fraction] * mode_phase(params, omega, x, time)).real();
}

double WaveSolution::u_at(int fraction, double x, double time) const {
    return (u_hat[fraction] * mode_phase(params, omega, x, time)).real();
}

double WaveSolution::velocity_envelope(double time) const {
    return std::abs(v_hat) * std::exp(-omega.real() * time);
}

std::vector<std::pair<std::string, WaveCoefficient>> WaveSolution::coefficient_table() const {
    std::vector<std::pair<std::string, WaveCoefficient>> rows;
    const double a = params.amplitude;
    auto row = [a](std::complex<double> hat) {
        return WaveCoefficient{hat.real() / a, -hat.imag() / a};
    };
    rows.emplace_back("rho_g", row(rho_g_hat));
    rows.emplace_back("v", row(v_hat));
    for (std::size_t j = 0; j < rho_hat.size(); ++j)
        rows.emplace_back("rho_" + std::to_string(j + 1), row(rho_hat[j]));
    for (std::size_t j = 0; j < u_hat.size(); ++j)
        rows.emplace_back("u_" + std::to_string(j + 1), row(u_hat[j]));
    return rows;
}

WaveSolution solve_wave(const WaveParams& params) {
    if (params.epsilon.size() != params.t_stop.size())
        throw OracleError("wave parameters need one epsilon per stopping time");
    if (!(params.wavenumber > 0.0) || !(params.sound_speed > 0.0) || !(params.rho_gas > 0.0))
        throw OracleError("wave parameters must be positive");

    WaveSolution sol;
    sol.params = params;
    const double omega_s = params.wavenumber * params.sound_speed;
    sol.real_roots = find_real_roots(params.epsilon, params.t_stop, omega_s);
    sol.omega = complex_pair(sol.real_roots, params.epsilon, params.t_stop, omega_s);

    const std::size_t n = params.t_stop.size();
    const double a = params.amplitude;
    sol.rho_g_hat = a;
    sol.v_hat = std::complex<double>(0.0, -1.0) * (sol.omega / omega_s) *
                (params.sound_speed / params.rho_gas) * a;
    sol.rho_hat.resize(n);
    sol.u_hat.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::complex<double> d = 1.0 - sol.omega * params.t_stop[j];
        if (d == 0.0) throw OracleError("amplitude denominator 1 - omega t_j vanished");
        sol.rho_hat[j] = a * params.epsilon[j] / d;
        sol.u_hat[j] = sol.v_hat / d;
    }
    return sol;
}

WaveParams wave_params_for(const RunPreset& preset) {
    if (preset.problem != Problem::dusty_wave)
        throw OracleError("wave oracle needs a DustyWave preset");
    const WaveInit init = wave_init();
    WaveParams p;
    p.wavenumber = 2.0 * std::numbers::pi * init.wave_count / preset.config.domain_length;
    p.amplitude = init.amplitude;
    p.sound_speed = preset.config.sound_speed;
    p.rho_gas = init.rho_gas;
    p.epsilon = preset.config.epsilon;
    p.t_stop = preset.config.stopping_times;
    return p;
}

} // namespace dusty
