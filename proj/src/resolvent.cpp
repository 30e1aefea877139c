#include "cpq/resolvent.hpp"

#include <cmath>

namespace cpq {

namespace {

// PV of int_a^b phi(k')/(k'^2 - k^2) dk' where the pole k lies strictly inside:
// subtract-the-singularity on a symmetric window [k-d, k+d], regular quadrature
// outside.
double pv_interval(const Fn& phi, double k, double a, double b,
                   const QuadratureConfig& cfg) {
    double d = 0.5 * std::min(k - a, b - k);
    if (!(d > 0)) throw std::invalid_argument("pv_interval: pole not interior");
    double phik = phi(k);
    Fn reg = [&](double kp) {
        double dk = kp - k;
        if (std::abs(dk) < 1e-14 * std::max(1.0, k)) {
            // removable point: use a one-sided difference of phi
            double h = 1e-6 * std::max(1.0, k);
            return (phi(k + h) - phik) / (h * (kp + k));
        }
        return (phi(kp) - phik) / (dk * (kp + k));
    };
    double mid = integrate_adaptive(reg, k - d, k + d, cfg).value;
    mid += phik * std::log((2.0 * k - d) / (2.0 * k + d)) / (2.0 * k);
    Fn plain = [&](double kp) { return phi(kp) / ((kp - k) * (kp + k)); };
    double out = 0.0;
    if (a < k - d) out += integrate_adaptive(plain, a, k - d, cfg).value;
    if (k + d < b) out += integrate_adaptive(plain, k + d, b, cfg).value;
    return out + mid;
}

} // namespace

complexd inverse_g(const OscillatorPair& pair, int which, double k, Branch branch,
                   const CutoffScheme& cutoff, const QuadratureConfig& quad) {
    pair.validate();
    double mu = pair.mu(which);
    double k0 = pair.k0;
    if (mu == 0.0) return complexd(k0 * k0 - k * k, 0.0);

    Fn phi = [&](double kp) { return 2.0 * std::pow(kp, 4) * cutoff.damp(kp); };
    double pv = 0.0;
    double upper = (cutoff.kind == CutoffKind::Sharp) ? cutoff.lambda : 40.0 * cutoff.lambda;
    if (k <= 0.0) {
        pv = integrate_adaptive([&](double kp) { return 2.0 * kp * kp * cutoff.damp(kp); },
                                0.0, upper, quad).value;
    } else if (k >= upper) {
        pv = integrate_adaptive([&](double kp) { return phi(kp) / ((kp - k) * (kp + k)); },
                                0.0, upper, quad).value;
    } else {
        pv = pv_interval(phi, k, 0.0, upper, quad);
    }

    double coeff = (4.0 / (3.0 * M_PI)) * k0 * mu * mu;
    double re = k0 * k0 - k * k - coeff * pv;
    double im = 0.0;
    if (k > 0.0 && (cutoff.kind == CutoffKind::Exponential || k < cutoff.lambda)) {
        im = -(4.0 / 3.0) * k0 * mu * mu * std::pow(k, 3) * cutoff.damp(k);
        if (branch == Branch::Minus) im = -im;
    }
    return complexd(re, im);
}

complexd sigma(const OscillatorPair& pair, Axis axis, double k, Branch branch,
               const QuadratureConfig& quad) {
    pair.validate();
    double k0 = pair.k0, r = pair.r;
    double mumu = pair.mu1 * pair.mu2;
    if (mumu == 0.0) return complexd(0.0, 0.0);

    double chunk = M_PI / r;
    std::vector<double> etas, vals;
    for (double lad : quad.damping_ladder) {
        double eta = lad / r;
        Fn phi = [&](double kp) {
            return 2.0 * std::pow(kp, 4) * h_kernel(axis, kp * r) * std::exp(-eta * kp);
        };
        double pv;
        if (k <= 0.0) {
            // no pole: head plus accelerated oscillatory tail of phi/(k'^2)
            Fn f = [&](double kp) { return -phi(kp) / (kp * kp); };
            double head = integrate_adaptive(f, 0.0, 4.0 * chunk, quad).value;
            pv = head + euler_tail(f, 4.0 * chunk, chunk, 64, quad).value;
        } else {
            double d = 0.5 * k;
            double phik = phi(k);
            Fn reg = [&](double kp) {
                double dk = kp - k;
                if (std::abs(dk) < 1e-14 * std::max(1.0, k)) {
                    double h = 1e-6 * std::max(1.0, k);
                    return (phi(k + h) - phik) / (h * (kp + k));
                }
                return (phi(kp) - phik) / (dk * (kp + k));
            };
            pv = integrate_adaptive(reg, k - d, k + d, quad).value;
            pv += phik * std::log((2.0 * k - d) / (2.0 * k + d)) / (2.0 * k);
            if (k - d > 0)
                pv += integrate_adaptive([&](double kp) { return phi(kp) / ((kp - k) * (kp + k)); },
                                         0.0, k - d, quad).value;
            Fn tailf = [&](double kp) { return phi(kp) / ((kp - k) * (kp + k)); };
            pv += euler_tail(tailf, k + d, chunk, 64, quad).value;
        }
        etas.push_back(eta);
        vals.push_back(pv);
    }
    double pv0 = extrapolate_to_zero(etas, vals);

    double re = -(2.0 / M_PI) * k0 * mumu * pv0;
    double im = 0.0;
    if (k > 0.0) {
        im = -2.0 * k0 * mumu * std::pow(k, 3) * h_kernel(axis, k * r);
        if (branch == Branch::Minus) im = -im;
    }
    return complexd(re, im);
}

double inverse_g_imag(const OscillatorPair& pair, int which, double xi,
                      const CutoffScheme& cutoff, const QuadratureConfig& quad,
                      bool renormalized) {
    pair.validate();
    double mu = pair.mu(which);
    double k0 = pair.k0;
    double base = k0 * k0 + xi * xi;
    if (mu == 0.0) return base;
    double upper = (cutoff.kind == CutoffKind::Sharp) ? cutoff.lambda : 40.0 * cutoff.lambda;
    double coeff = (8.0 / (3.0 * M_PI)) * k0 * mu * mu;
    if (renormalized) {
        // Sig(xi) - Sig(0) = -coeff xi^2 Int k'^2 D / (k'^2 + xi^2)
        double I = integrate_adaptive(
            [&](double kp) { return kp * kp * cutoff.damp(kp) / (kp * kp + xi * xi); },
            0.0, upper, quad).value;
        return base + coeff * xi * xi * I;
    }
    double I = integrate_adaptive(
        [&](double kp) { return std::pow(kp, 4) * cutoff.damp(kp) / (kp * kp + xi * xi); },
        0.0, upper, quad).value;
    return base - coeff * I;
}

double sigma_imag(const OscillatorPair& pair, Axis axis, double xi,
                  const QuadratureConfig& quad) {
    pair.validate();
    double mumu = pair.mu1 * pair.mu2;
    if (mumu == 0.0) return 0.0;
    double r = pair.r;
    double chunk = M_PI / r;
    std::vector<double> etas, vals;
    for (double lad : quad.damping_ladder) {
        double eta = lad / r;
        Fn f = [&](double kp) {
            return std::pow(kp, 4) * h_kernel(axis, kp * r) * std::exp(-eta * kp) /
                   (kp * kp + xi * xi);
        };
        double khead = (std::floor(std::max(2.0 * xi + 2.0, 4.0) / chunk) + 1.0) * chunk;
        double head = integrate_adaptive(f, 0.0, khead, quad).value;
        double tail = euler_tail(f, khead, chunk, 64, quad).value;
        etas.push_back(eta);
        vals.push_back(head + tail);
    }
    double I = extrapolate_to_zero(etas, vals);
    return -(4.0 * pair.k0 * mumu / M_PI) * I;
}

double sigma_imag_closed(const OscillatorPair& pair, Axis axis, double xi) {
    double n = xi * pair.r;
    double pref = pair.k0 * pair.mu1 * pair.mu2 / std::pow(pair.r, 3);
    if (axis == Axis::Z) return -4.0 * pref * std::exp(-n) * (1.0 + n);
    return 2.0 * pref * std::exp(-n) * (1.0 + n + n * n);
}

complexd grid_inverse_g(const OscillatorPair& pair, int which, const ModeGrid& grid,
                        Axis axis, double k) {
    double k0 = pair.k0;
    complexd s = 0.0;
    for (const Mode& m : grid.modes) {
        complexd f = coupling_constant(pair, which, axis, m, grid.volume);
        s += f * f * (2.0 * m.k / (m.k * m.k - k * k));
    }
    return k0 * k0 - k * k + 2.0 * k0 * s;
}

complexd grid_sigma(const OscillatorPair& pair, const ModeGrid& grid, Axis axis, double k) {
    double k0 = pair.k0;
    Vec3 rvec{0.0, 0.0, pair.r};
    complexd s = 0.0;
    for (const Mode& m : grid.modes) {
        complexd f1 = coupling_constant(pair, 1, axis, m, grid.volume);
        complexd f2 = coupling_constant(pair, 2, axis, m, grid.volume);
        s += f1 * f2 * std::cos(dot(m.kvec, rvec)) * (2.0 * m.k / (m.k * m.k - k * k));
    }
    return 2.0 * k0 * s;
}

IdentityRhs identity_f1(const OscillatorPair& pair, int which, Axis axis,
                        double kprime, double ktilde, const ModeGrid& grid) {
    if (kprime == ktilde) throw std::invalid_argument("identity_f1: kprime == ktilde");
    double k0 = pair.k0;
    complexd gp = grid_inverse_g(pair, which, grid, axis, kprime);
    complexd gt = grid_inverse_g(pair, which, grid, axis, ktilde);
    complexd sp = grid_sigma(pair, grid, axis, kprime);
    complexd st = grid_sigma(pair, grid, axis, ktilde);
    IdentityRhs out;
    out.upper = ((gp - gt) / (kprime - ktilde) + (kprime + ktilde)) / (2.0 * k0);
    out.lower = (sp - st) / (2.0 * k0 * (kprime - ktilde));
    return out;
}

IdentityRhs identity_f2(const OscillatorPair& pair, int which, Axis axis,
                        double kprime, double ktilde, const ModeGrid& grid) {
    if (kprime == ktilde) throw std::invalid_argument("identity_f2: kprime == ktilde");
    double k0 = pair.k0;
    complexd gp = grid_inverse_g(pair, which, grid, axis, kprime);
    complexd gt = grid_inverse_g(pair, which, grid, axis, ktilde);
    complexd sp = grid_sigma(pair, grid, axis, kprime);
    complexd st = grid_sigma(pair, grid, axis, ktilde);
    IdentityRhs out;
    out.upper = k0 / 2.0 -
                (std::pow(kprime, 3) + std::pow(ktilde, 3) + kprime * gp + ktilde * gt) /
                    (2.0 * k0 * (kprime + ktilde));
    out.lower = -(kprime * sp + ktilde * st) / (2.0 * k0 * (kprime + ktilde));
    return out;
}

namespace {

IdentityRhs identity_lhs(const OscillatorPair& pair, int which, Axis axis,
                         double kprime, double ktilde, const ModeGrid& grid,
                         bool second_family) {
    Vec3 rvec{0.0, 0.0, pair.r};
    IdentityRhs out{0.0, 0.0};
    for (const Mode& m : grid.modes) {
        double k = m.k;
        double kern;
        if (second_family)
            kern = 1.0 / ((kprime - k) * (ktilde + k)) + 1.0 / ((ktilde - k) * (kprime + k));
        else
            kern = 1.0 / ((kprime - k) * (ktilde - k)) - 1.0 / ((ktilde + k) * (kprime + k));
        if (second_family) kern *= k;
        complexd fi = coupling_constant(pair, which, axis, m, grid.volume);
        complexd f1 = coupling_constant(pair, 1, axis, m, grid.volume);
        complexd f2 = coupling_constant(pair, 2, axis, m, grid.volume);
        out.upper += fi * fi * kern;
        out.lower += f1 * f2 * std::exp(complexd(0.0, dot(m.kvec, rvec))) * kern;
    }
    return out;
}

} // namespace

IdentityRhs identity_f1_lhs(const OscillatorPair& pair, int which, Axis axis,
                            double kprime, double ktilde, const ModeGrid& grid) {
    return identity_lhs(pair, which, axis, kprime, ktilde, grid, false);
}

IdentityRhs identity_f2_lhs(const OscillatorPair& pair, int which, Axis axis,
                            double kprime, double ktilde, const ModeGrid& grid) {
    return identity_lhs(pair, which, axis, kprime, ktilde, grid, true);
}

} // namespace cpq
