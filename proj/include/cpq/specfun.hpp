#pragma once
#include <cmath>

namespace cpq {

enum class Axis { X = 0, Y = 1, Z = 2 };

// Spherical Bessel functions of order 0 and 1. Series branch below |x| = 1e-2
// avoids the cancellation in j1; both branches agree to ~1e-13 at the switch.
inline double spherical_j0(double x) {
    if (std::abs(x) < 1e-2) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return std::sin(x) / x;
}

inline double spherical_j1(double x) {
    if (std::abs(x) < 1e-2) {
        double x2 = x * x;
        return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
    }
    return std::sin(x) / (x * x) - std::cos(x) / x;
}

// j1(x)/x with the removable singularity handled; -> 1/3 as x -> 0.
inline double j1_over_x(double x) {
    if (std::abs(x) < 1e-2) {
        double x2 = x * x;
        return (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0)) / 3.0;
    }
    return spherical_j1(x) / x;
}

// Dipole-dipole geometric kernel. Z is the separation direction.
//   h_X = h_Y = j0(x) - j1(x)/x,   h_Z = 2 j1(x)/x,   h_l(0) = 2/3.
// Trace identity: h_X + h_Y + h_Z = 2 j0(x).
inline double h_kernel(Axis axis, double x) {
    double joy = j1_over_x(x);
    if (axis == Axis::Z) return 2.0 * joy;
    return spherical_j0(x) - joy;
}

} // namespace cpq
