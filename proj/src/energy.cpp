#include "cpq/energy.hpp"

#include <cmath>
#include <limits>

namespace cpq {

namespace {

// Energy mode sum with a generic lambda table: omega[m] are the transformed-mode
// labels, lam(m, 3*i + l) the inverse coefficients restricted to the six
// oscillator operators.
complexd eq13_sum(const OscillatorPair& pair, const ModeGrid& grid,
                  const Eigen::VectorXd& omega, const Eigen::MatrixXcd& lam) {
    double k0 = pair.k0;
    int D = static_cast<int>(omega.size());
    int N = static_cast<int>(grid.modes.size());
    Vec3 rvec{0.0, 0.0, pair.r};

    complexd e = 0.0;
    for (int m = 0; m < D; ++m) {
        double w = omega(m);
        e += k0 * (3.0 * w * w - 2.0 * w * k0 - k0 * k0) / ((w + k0) * (w + k0)) *
             lam.row(m).squaredNorm();
    }
    for (int mb = 0; mb < N; ++mb) {
        const Mode& mm = grid.modes[mb];
        complexd ph = std::exp(complexd(0.0, dot(mm.kvec, rvec)));
        complexd f1[3], f2[3];
        for (int l = 0; l < 3; ++l) {
            f1[l] = coupling_constant(pair, 1, static_cast<Axis>(l), mm, grid.volume);
            f2[l] = coupling_constant(pair, 2, static_cast<Axis>(l), mm, grid.volume);
        }
        for (int m = 0; m < D; ++m) {
            double w = omega(m);
            double pref = -4.0 * k0 * k0 * mm.k /
                          ((mm.k + w) * (mm.k + w) * (w + k0) * (w + k0));
            complexd s = 0.0;
            for (int l = 0; l < 3; ++l) {
                complexd l1 = lam(m, l), l2 = lam(m, 3 + l);
                s += f1[l] * f1[l] * std::norm(l1) + f2[l] * f2[l] * std::norm(l2);
                complexd cr = f1[l] * f2[l] * std::conj(ph) * l1 * std::conj(l2);
                s += cr + std::conj(cr);
            }
            e += pref * s;
        }
    }
    return e;
}

} // namespace

double e0_eq13(const OscillatorPair& pair, const ModeGrid& grid, double* imag_residue) {
    BdgCoefficients c = bdg_coefficients(pair, grid);
    complexd e = eq13_sum(pair, grid, c.omega, c.lambda_osc);
    if (imag_residue) *imag_residue = std::abs(e.imag());
    return e.real();
}

EnergyBreakdown e0_discrete(const OscillatorPair& pair, const ModeGrid& grid) {
    pair.validate();
    double im_full = 0.0, im1 = 0.0, im2 = 0.0;
    EnergyBreakdown out;
    out.total = e0_eq13(pair, grid, &im_full);
    OscillatorPair p1 = pair, p2 = pair;
    p1.mu2 = 0.0;
    p2.mu1 = 0.0;
    double a1 = e0_eq13(p1, grid, &im1);
    double a2 = e0_eq13(p2, grid, &im2);
    out.single_atom_part = a1 + a2;
    out.cross_part = out.total - out.single_atom_part;
    out.imag_residue = std::max({im_full, im1, im2});
    return out;
}

namespace {

// Composite GK15 over [a, b] with panels no longer than maxlen: the integrands
// here oscillate with period 2 pi, so fixed half-period-scale panels resolve
// them without adaptive bookkeeping.
double composite(const Fn& f, double a, double b, double maxlen) {
    int n = std::max(1, static_cast<int>(std::ceil((b - a) / maxlen)));
    double h = (b - a) / n, s = 0.0;
    for (int i = 0; i < n; ++i) s += gk15(f, a + i * h, a + (i + 1) * h).value;
    return s;
}

double kern_u(double y) { return spherical_j0(y) - j1_over_x(y); }
double kern_w(double y) { return 3.0 * j1_over_x(y) - spherical_j0(y); }

constexpr int kInnerChunks = 24;
constexpr int kOuterChunks = 32;

// PV int_0^inf y^4 ker(y) / (x^2 - y^2) dy, Euler-summed oscillatory tail.
double inner_pv(double (*ker)(double), double x, const QuadratureConfig& quad) {
    Fn phi = [&](double y) { return std::pow(y, 4) * ker(y); };
    double d = std::min(0.5 * x, 1.0);
    double phix = phi(x);
    Fn reg = [&](double y) {
        double dy = y - x;
        if (std::abs(dy) < 1e-14 * std::max(1.0, x)) {
            double h = 1e-6 * std::max(1.0, x);
            return (phi(x + h) - phix) / (h * (y + x));
        }
        return (phi(y) - phix) / (dy * (y + x));
    };
    double val = composite(reg, x - d, x + d, M_PI / 2);
    val += phix * std::log((2.0 * x - d) / (2.0 * x + d)) / (2.0 * x);
    Fn plain = [&](double y) { return phi(y) / ((y - x) * (y + x)); };
    if (x - d > 0) val += composite(plain, 0.0, x - d, M_PI / 2);
    val += euler_tail(plain, x + d, M_PI, kInnerChunks, quad).value;
    return -val;  // computed against y^2 - x^2
}

// int_0^inf y^4 ker(y) / (x + y)^2 dy, same tail treatment.
double inner_i2(double (*ker)(double), double x, const QuadratureConfig& quad) {
    Fn f = [&](double y) { return std::pow(y, 4) * ker(y) / ((x + y) * (x + y)); };
    return composite(f, 0.0, M_PI, M_PI / 2) +
           euler_tail(f, M_PI, M_PI, kInnerChunks, quad).value;
}

double outer_integral(const std::function<double(double)>& inner_u,
                      const std::function<double(double)>& inner_w,
                      const QuadratureConfig& quad) {
    Fn g = [&](double x) {
        if (x <= 0.0) return 0.0;
        // x^2 [x j0(x) U(x) + j1(x) W(x)], with x j0(x) = sin x
        return x * x * (std::sin(x) * inner_u(x) + spherical_j1(x) * inner_w(x));
    };
    // the product of two spherical-Bessel factors oscillates at frequency 2:
    // half-period chunks of length pi/2 keep the Euler chunk series alternating
    QuadratureConfig outer_cfg = quad;
    outer_cfg.rel_tol = std::max(quad.rel_tol, 1e-8);
    outer_cfg.max_subdivisions = 16;
    double head = integrate_adaptive(g, 0.0, M_PI / 2, outer_cfg).value;
    return head + euler_tail(g, M_PI / 2, M_PI / 2, kOuterChunks, outer_cfg).value;
}

} // namespace

double integral_I1(const QuadratureConfig& quad) {
    return outer_integral([&](double x) { return inner_pv(kern_u, x, quad); },
                          [&](double x) { return inner_pv(kern_w, x, quad); }, quad);
}

double integral_I2(const QuadratureConfig& quad) {
    return outer_integral([&](double x) { return inner_i2(kern_u, x, quad); },
                          [&](double x) { return inner_i2(kern_w, x, quad); }, quad);
}

double vcp_fourth_order_at(const OscillatorPair& pair, double r) {
    if (!(r > 0)) throw std::invalid_argument("vcp_fourth_order_at: r must be > 0");
    double a1 = static_polarizability(pair, 1);
    double a2 = static_polarizability(pair, 2);
    return -23.0 * a1 * a2 / (4.0 * M_PI * std::pow(r, 7));
}

double vcp_fourth_order_from_integrals(const OscillatorPair& pair, double r,
                                       double i1, double i2) {
    double mu2 = pair.mu1 * pair.mu1 * pair.mu2 * pair.mu2;
    return 16.0 * mu2 / (M_PI * M_PI * pair.k0 * pair.k0) * (2.0 * i1 + i2) /
           std::pow(r, 7);
}

PotentialCurve vcp_fourth_order(const OscillatorPair& pair,
                                const std::vector<double>& r_samples) {
    pair.validate();
    PotentialCurve out;
    out.order = PotentialOrder::FourthOrderFarZone;
    for (double r : r_samples) {
        double v = vcp_fourth_order_at(pair, r);
        out.samples.push_back({r, v, v, 0.0, true});
    }
    return out;
}

double vcp_all_orders_at(const OscillatorPair& pair, double r,
                         const CutoffScheme& cutoff, const QuadratureConfig& quad,
                         double* err_est) {
    OscillatorPair p = pair;
    p.r = r;
    p.validate();
    Fn integrand = [&](double xi) {
        double d1 = inverse_g_imag(p, 1, xi, cutoff, quad, true);
        double d2 = inverse_g_imag(p, 2, xi, cutoff, quad, true);
        double sx = sigma_imag(p, Axis::X, xi, quad);
        double sz = sigma_imag(p, Axis::Z, xi, quad);
        double ax = sx * sx / (d1 * d2);
        double az = sz * sz / (d1 * d2);
        if (!(ax < 1.0) || !(az < 1.0))
            throw PoleError("vcp_all_orders: log argument not positive "
                            "(coupling beyond stability threshold)");
        return 2.0 * std::log1p(-ax) + std::log1p(-az);
    };
    // sigma(i xi)^2 ~ e^{-2 xi r}: the integrand is spent past xi ~ 20/r.
    // abs_tol = 0: the integral scales like r^{-7} and must not be clamped by
    // an absolute floor.
    QuadratureConfig cfg = quad;
    cfg.rel_tol = std::max(quad.rel_tol, 1e-8);
    cfg.abs_tol = 0.0;
    cfg.max_subdivisions = 48;
    QuadResult res = integrate_adaptive(integrand, 0.0, 25.0 / r, cfg);
    if (err_est) *err_est = res.error / (2.0 * M_PI);
    return res.value / (2.0 * M_PI);
}

PotentialCurve vcp_all_orders(const OscillatorPair& pair,
                              const std::vector<double>& r_samples,
                              const CutoffScheme& cutoff, const QuadratureConfig& quad) {
    PotentialCurve out;
    out.order = PotentialOrder::AllOrdersNumeric;
    for (double r : r_samples) {
        PotentialSample s;
        s.r = r;
        s.v4 = vcp_fourth_order_at(pair, r);
        try {
            s.v = vcp_all_orders_at(pair, r, cutoff, quad, &s.err);
        } catch (const QuadratureError& e) {
            s.v = std::numeric_limits<double>::quiet_NaN();
            s.err = e.achieved;
            s.converged = false;
        }
        out.samples.push_back(s);
    }
    return out;
}

double loglog_slope(const PotentialCurve& curve) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const PotentialSample& s : curve.samples) {
        if (!s.converged || !(s.r > 0) || s.v == 0.0) continue;
        double x = std::log(s.r), y = std::log(std::abs(s.v));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("loglog_slope: need at least two samples");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace cpq
