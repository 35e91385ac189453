#pragma once

#include <cmath>

namespace dusty {

/// Cubic-spline kernel evaluation at signed separation r_ab = r_a - r_b.
/// Compact support: w and dw vanish for q = |r_ab|/h >= 2.
struct KernelEval {
    double w;   // W(|r_ab|, h), units 1/length
    double dw;  // dW/dr_a, odd in r_ab, units 1/length^2
    double q;   // |r_ab| / h
};

/// Standard 1D cubic spline with prefactor 2/(3h).
inline KernelEval kernel(double r_ab, double h) {
    const double q = std::abs(r_ab) / h;
    const double norm = 2.0 / (3.0 * h);
    KernelEval k{0.0, 0.0, q};
    if (q < 1.0) {
        k.w = norm * (1.0 - 1.5 * q * q + 0.75 * q * q * q);
        k.dw = norm / h * (-3.0 * q + 2.25 * q * q);
    } else if (q < 2.0) {
        const double s = 2.0 - q;
        k.w = norm * 0.25 * s * s * s;
        k.dw = norm / h * (-0.75 * s * s);
    }
    if (r_ab < 0.0) k.dw = -k.dw;
    return k;
}

/// Support radius of the kernel.
inline double kernel_support(double h) { return 2.0 * h; }

} // namespace dusty
