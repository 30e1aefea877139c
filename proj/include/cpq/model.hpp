#pragma once
#include <complex>
#include <stdexcept>
#include <vector>
#include <array>
#include <cmath>

#include "cpq/specfun.hpp"

namespace cpq {

using complexd = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Units: hbar = c = 1. Internally every wavenumber/energy is in units of k0,
// but the types carry k0 explicitly so CLI-boundary conversions stay trivial.
struct OscillatorPair {
    double k0 = 1.0;   // oscillator frequency (wavenumber)
    double mu1 = 0.0;  // dipole magnitude, oscillator 1 (at the origin)
    double mu2 = 0.0;  // dipole magnitude, oscillator 2 (at +r zhat)
    double r = 1.0;    // separation, > 0

    void validate() const {
        if (!(k0 > 0)) throw std::invalid_argument("OscillatorPair: k0 must be > 0");
        if (mu1 < 0 || mu2 < 0) throw std::invalid_argument("OscillatorPair: mu must be >= 0");
        if (!(r > 0)) throw std::invalid_argument("OscillatorPair: r must be > 0");
    }
    double mu(int which) const {
        if (which == 1) return mu1;
        if (which == 2) return mu2;
        throw std::invalid_argument("oscillator index must be 1 or 2");
    }
};

struct Mode {
    Vec3 kvec{};        // wavevector
    Vec3 pol{};         // polarization unit vector (orthogonal to kvec)
    double k = 0.0;     // |kvec|, cached
    double weight = 1.0; // cell-measure multiplier for shell grids (1 for a bare box mode)
};

struct ModeGrid {
    std::vector<Mode> modes;
    double volume = 1.0;  // quantization volume V
};

// f^{i l}_{k j} = -i sqrt(2 pi k / V) mu_i (e_{k j})_l  -- purely imaginary.
// For shell grids the per-mode weight folds the cell measure into V.
inline complexd coupling_constant(const OscillatorPair& pair, int which, Axis axis,
                                  const Mode& mode, double volume) {
    if (!(volume > 0)) throw std::invalid_argument("coupling_constant: volume must be > 0");
    double g = pair.mu(which) * mode.pol[static_cast<int>(axis)]
             * std::sqrt(2.0 * M_PI * mode.k * mode.weight / volume);
    return complexd(0.0, -g);
}

// alpha_i = 2 mu_i^2 / k0
inline double static_polarizability(const OscillatorPair& pair, int which) {
    return 2.0 * pair.mu(which) * pair.mu(which) / pair.k0;
}

// Continuum angular moments of coupling products at fixed k' (polarization sum
// plus angular integration):
//   same oscillator:  sum f f       -> -(2/3pi) k' mu_i^2 delta_{ll'}
//   cross, with phase e^{+-ik'.r}:  -> -(k'/pi) h_l(k'r) mu1 mu2 delta_{ll'}
// Radial call sites supply the k'^2 density-of-states factor themselves.
double angular_coupling_moment(const OscillatorPair& pair, int i, int ip,
                               Axis l, Axis lp, double kprime, bool with_phase,
                               double r);

} // namespace cpq
