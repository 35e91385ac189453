#include "dusty/riemann.hpp"

#include "dusty/errors.hpp"

#include <cmath>

namespace dusty {

namespace {

struct Side {
    double rho, v, p, a;  // a already carries the sound-speed scale
    double gamma;

    // Toro's pressure function f_K and its derivative. The shock branch is
    // written through the scaled sound speed so the whole function scales
    // uniformly with it.
    double f(double ps) const {
        if (ps > p) {
            const double g1 = (gamma + 1.0) / (2.0 * gamma);
            const double g2 = (gamma - 1.0) / (2.0 * gamma);
            const double q = std::sqrt(g1 * ps / p + g2);
            return (ps - p) / (rho_eff() * a * q);
        }
        return 2.0 * a / (gamma - 1.0) *
               (std::pow(ps / p, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
    }
    double df(double ps) const {
        if (ps > p) {
            const double g1 = (gamma + 1.0) / (2.0 * gamma);
            const double g2 = (gamma - 1.0) / (2.0 * gamma);
            const double q = std::sqrt(g1 * ps / p + g2);
            return (q - (ps - p) * g1 / (2.0 * p * q)) / (rho_eff() * a * q * q);
        }
        return std::pow(ps / p, -(gamma + 1.0) / (2.0 * gamma)) / (rho_eff() * a);
    }
    // Density consistent with the scaled sound speed, gamma p / a^2.
    double rho_eff() const { return gamma * p / (a * a); }
};

} // namespace

double effective_sound_speed(double sound_speed, std::span<const double> epsilon) {
    double sum = 1.0;
    for (double e : epsilon) sum += e;
    return sound_speed / std::sqrt(sum);
}

ShockReference solve_shock(const FluidState& left, const FluidState& right,
                           double gamma, double scale) {
    if (!(left.rho > 0.0 && right.rho > 0.0 && left.p > 0.0 && right.p > 0.0))
        throw OracleError("Riemann states must have positive density and pressure");
    if (!(gamma > 1.0) || !(scale > 0.0))
        throw OracleError("Riemann solver needs gamma > 1 and a positive sound-speed scale");

    ShockReference ref;
    ref.left = left;
    ref.right = right;
    ref.gamma = gamma;
    ref.scale = scale;

    const double a_l = scale * std::sqrt(gamma * left.p / left.rho);
    const double a_r = scale * std::sqrt(gamma * right.p / right.rho);
    const double dv = right.v - left.v;
    if (2.0 * (a_l + a_r) / (gamma - 1.0) <= dv)
        throw OracleError("Riemann problem forms vacuum");

    const Side sl{left.rho, left.v, left.p, a_l, gamma};
    const Side sr{right.rho, right.v, right.p, a_r, gamma};

    // Two-rarefaction guess, then Newton on f_L + f_R + dv = 0.
    const double z = (gamma - 1.0) / (2.0 * gamma);
    double ps = std::pow((a_l + a_r - 0.5 * (gamma - 1.0) * dv) /
                             (a_l / std::pow(left.p, z) + a_r / std::pow(right.p, z)),
                         1.0 / z);
    ps = std::max(ps, 1e-14 * std::min(left.p, right.p));
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const double g = sl.f(ps) + sr.f(ps) + dv;
        const double dg = sl.df(ps) + sr.df(ps);
        double next = ps - g / dg;
        if (!(next > 0.0)) next = 0.5 * ps;
        const double change = std::abs(next - ps) / (0.5 * (next + ps));
        ps = next;
        if (change < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) throw OracleError("star-pressure iteration did not converge");

    ref.p_star = ps;
    ref.v_star = 0.5 * (left.v + right.v) + 0.5 * (sr.f(ps) - sl.f(ps));

    const double mu2 = (gamma - 1.0) / (gamma + 1.0);
    ref.left_is_shock = ps > left.p;
    ref.right_is_shock = ps > right.p;

    if (ref.left_is_shock) {
        const double pr = ps / left.p;
        ref.rho_star_left = left.rho * (pr + mu2) / (mu2 * pr + 1.0);
        const double s = left.v - a_l * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr +
                                                  (gamma - 1.0) / (2.0 * gamma));
        ref.left_head = ref.left_tail = s;
    } else {
        ref.rho_star_left = left.rho * std::pow(ps / left.p, 1.0 / gamma);
        const double a_star = a_l * std::pow(ps / left.p, z);
        ref.left_head = left.v - a_l;
        ref.left_tail = ref.v_star - a_star;
    }

    if (ref.right_is_shock) {
        const double pr = ps / right.p;
        ref.rho_star_right = right.rho * (pr + mu2) / (mu2 * pr + 1.0);
        const double s = right.v + a_r * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr +
                                                   (gamma - 1.0) / (2.0 * gamma));
        ref.right_head = ref.right_tail = s;
    } else {
        ref.rho_star_right = right.rho * std::pow(ps / right.p, 1.0 / gamma);
        const double a_star = a_r * std::pow(ps / right.p, z);
        ref.right_head = right.v + a_r;
        ref.right_tail = ref.v_star + a_star;
    }

    return ref;
}

ShockSample ShockReference::sample(double xi) const {
    const double a_l = scale * std::sqrt(gamma * left.p / left.rho);
    const double a_r = scale * std::sqrt(gamma * right.p / right.rho);
    ShockSample s;

    if (xi <= v_star) {
        if (left_is_shock) {
            if (xi <= left_head) s = {left.rho, left.v, left.p, 0.0};
            else s = {rho_star_left, v_star, p_star, 0.0};
        } else if (xi <= left_head) {
            s = {left.rho, left.v, left.p, 0.0};
        } else if (xi >= left_tail) {
            s = {rho_star_left, v_star, p_star, 0.0};
        } else {
            const double a = 2.0 / (gamma + 1.0) *
                             (a_l + 0.5 * (gamma - 1.0) * (left.v - xi));
            s.v = xi + a;
            s.rho = left.rho * std::pow(a / a_l, 2.0 / (gamma - 1.0));
            s.p = left.p * std::pow(a / a_l, 2.0 * gamma / (gamma - 1.0));
        }
    } else {
        if (right_is_shock) {
            if (xi >= right_head) s = {right.rho, right.v, right.p, 0.0};
            else s = {rho_star_right, v_star, p_star, 0.0};
        } else if (xi >= right_head) {
            s = {right.rho, right.v, right.p, 0.0};
        } else if (xi <= right_tail) {
            s = {rho_star_right, v_star, p_star, 0.0};
        } else {
            const double a = 2.0 / (gamma + 1.0) *
                             (a_r - 0.5 * (gamma - 1.0) * (right.v - xi));
            s.v = xi - a;
            s.rho = right.rho * std::pow(a / a_r, 2.0 / (gamma - 1.0));
            s.p = right.p * std::pow(a / a_r, 2.0 * gamma / (gamma - 1.0));
        }
    }
    s.e = s.p / ((gamma - 1.0) * s.rho);
    return s;
}

ShockSample ShockReference::at(double x, double x0, double t) const {
    if (t <= 0.0) {
        const FluidState& st = (x < x0) ? left : right;
        return {st.rho, st.v, st.p, st.p / ((gamma - 1.0) * st.rho)};
    }
    return sample((x - x0) / t);
}

ShockReference shock_reference_for(const RunPreset& preset) {
    if (preset.problem != Problem::dusty_shock)
        throw OracleError("shock reference needs a DustyShock preset");
    const ShockInit init = shock_init();
    const double scale = effective_sound_speed(1.0, preset.config.epsilon);
    return solve_shock({init.rho_left, 0.0, init.p_left},
                       {init.rho_right, 0.0, init.p_right},
                       preset.config.gamma, scale);
}

std::vector<double> characteristic_speeds(double v, std::span<const double> u,
                                          double sound_speed) {
    std::vector<double> out;
    out.reserve(2 * u.size() + 2);
    for (double uj : u) {
        out.push_back(uj);
        out.push_back(uj);
    }
    out.push_back(v - sound_speed);
    out.push_back(v + sound_speed);
    return out;
}

} // namespace dusty
