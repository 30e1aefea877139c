#include "cpq/bogoliubov.hpp"

namespace cpq {

namespace {

constexpr double kShellTol = 1e-9;

bool same_shell(double ka, double kb) {
    return std::abs(ka - kb) <= kShellTol * std::max(1.0, std::max(ka, kb));
}

int antipode_index(const ModeGrid& grid, int m) {
    const Mode& mm = grid.modes[m];
    for (int i = 0; i < static_cast<int>(grid.modes.size()); ++i) {
        const Mode& mi = grid.modes[i];
        double d = 0.0, dp = 0.0;
        for (int c = 0; c < 3; ++c) {
            d += std::abs(mi.kvec[c] + mm.kvec[c]);
            dp += std::abs(mi.pol[c] - mm.pol[c]);
        }
        if (d < 1e-12 * std::max(1.0, mm.k) && dp < 1e-12) return i;
    }
    return -1;
}

} // namespace

MixMatrix mix_matrix_from(complexd inv_g1, complexd inv_g2, complexd sig) {
    complexd den = inv_g1 * inv_g2 - sig * sig;  // (1 - sigma^2 G1 G2)/(G1 G2)
    double scale = std::max({std::abs(inv_g1 * inv_g2), std::abs(sig * sig), 1e-300});
    if (std::abs(den) < 1e-10 * scale)
        throw PoleError("mix_matrix: dressed-system pole (1 - sigma^2 G1 G2 ~ 0)");
    MixMatrix out;
    out.inv_g1 = inv_g1;
    out.inv_g2 = inv_g2;
    out.sig = sig;
    out.m << inv_g2 / den, -sig / den, -sig / den, inv_g1 / den;
    return out;
}

MixMatrix mix_matrix(const OscillatorPair& pair, Axis axis, double k, Branch branch,
                     const CutoffScheme& cutoff, const QuadratureConfig& quad) {
    complexd g1 = inverse_g(pair, 1, k, branch, cutoff, quad);
    complexd g2 = inverse_g(pair, 2, k, branch, cutoff, quad);
    complexd s = sigma(pair, axis, k, branch, quad);
    return mix_matrix_from(g1, g2, s);
}

GridDressing grid_dressing(const OscillatorPair& pair, const ModeGrid& grid, Axis axis,
                           int target) {
    double k0 = pair.k0;
    double kt = grid.modes[target].k;
    Vec3 rvec{0.0, 0.0, pair.r};
    complexd s1 = 0.0, s2 = 0.0, sx = 0.0;
    for (const Mode& m : grid.modes) {
        double kern = same_shell(m.k, kt) ? 1.0 / (2.0 * kt)
                                          : 2.0 * m.k / (m.k * m.k - kt * kt);
        complexd f1 = coupling_constant(pair, 1, axis, m, grid.volume);
        complexd f2 = coupling_constant(pair, 2, axis, m, grid.volume);
        s1 += f1 * f1 * kern;
        s2 += f2 * f2 * kern;
        sx += f1 * f2 * std::cos(dot(m.kvec, rvec)) * kern;
    }
    GridDressing d;
    d.inv_g1 = k0 * k0 - kt * kt + 2.0 * k0 * s1;
    d.inv_g2 = k0 * k0 - kt * kt + 2.0 * k0 * s2;
    d.sig = 2.0 * k0 * sx;
    return d;
}

CoefficientSet direct_coefficients(const OscillatorPair& pair, const ModeGrid& grid,
                                   int target) {
    int N = static_cast<int>(grid.modes.size());
    const Mode& tm = grid.modes[target];
    double kt = tm.k, k0 = pair.k0;
    Vec3 rvec{0.0, 0.0, pair.r};

    CoefficientSet out;
    out.target = target;
    out.T = Eigen::VectorXcd::Zero(N);
    out.R = Eigen::VectorXcd::Zero(N);
    out.T(target) = 1.0;

    complexd ph_t = std::exp(complexd(0.0, dot(tm.kvec, rvec)));
    for (int a = 0; a < 3; ++a) {
        Axis axis = static_cast<Axis>(a);
        GridDressing d = grid_dressing(pair, grid, axis, target);
        MixMatrix M = mix_matrix_from(d.inv_g1, d.inv_g2, d.sig);
        Eigen::Vector2cd F;
        F << coupling_constant(pair, 1, axis, tm, grid.volume),
             coupling_constant(pair, 2, axis, tm, grid.volume) * ph_t;
        Eigen::Vector2cd MF = M.m * F;
        out.t(0, a) = -(kt + k0) * MF(0);
        out.t(1, a) = -(kt + k0) * MF(1);
        out.r(0, a) = -(kt - k0) * MF(0);
        out.r(1, a) = -(kt - k0) * MF(1);
        for (int m = 0; m < N; ++m) {
            const Mode& mm = grid.modes[m];
            complexd f1 = coupling_constant(pair, 1, axis, mm, grid.volume);
            complexd f2 = coupling_constant(pair, 2, axis, mm, grid.volume);
            complexd ph = std::exp(complexd(0.0, dot(mm.kvec, rvec)));
            if (!same_shell(mm.k, kt))
                out.T(m) += (2.0 * k0 / (kt - mm.k)) * (f1 * MF(0) + f2 * std::conj(ph) * MF(1));
            out.R(m) += -(2.0 * k0 / (kt + mm.k)) * (f1 * MF(0) + f2 * ph * MF(1));
        }
    }
    return out;
}

InverseCoefficientSet lambda_coefficients(const OscillatorPair& pair, const Mode& mode,
                                          double volume, Branch branch,
                                          const CutoffScheme& cutoff,
                                          const QuadratureConfig& quad) {
    complexd g1 = inverse_g(pair, 1, mode.k, branch, cutoff, quad);
    complexd g2 = inverse_g(pair, 2, mode.k, branch, cutoff, quad);
    InverseCoefficientSet out;
    double k = mode.k, k0 = pair.k0;
    Vec3 rvec{0.0, 0.0, pair.r};
    complexd phm = std::exp(complexd(0.0, -dot(mode.kvec, rvec)));
    for (int a = 0; a < 3; ++a) {
        Axis axis = static_cast<Axis>(a);
        complexd s = sigma(pair, axis, mode.k, branch, quad);
        complexd den = complexd(1.0, 0.0) - s * s / (g1 * g2);
        double scale = std::max(std::abs(s * s / (g1 * g2)), 1.0);
        if (std::abs(den) < 1e-10 * scale)
            throw PoleError("lambda_coefficients: dressed-system pole");
        complexd f1 = coupling_constant(pair, 1, axis, mode, volume);
        complexd f2 = coupling_constant(pair, 2, axis, mode, volume);
        out.lambda(0, a) = (k + k0) / (g1 * den) * (f1 - f2 * phm * s / g2);
        out.lambda(1, a) = (k + k0) / (g2 * den) * (f2 * phm - f1 * s / g1);
        out.tau(0, a) = -((k - k0) / (k + k0)) * std::conj(out.lambda(0, a));
        out.tau(1, a) = -((k - k0) / (k + k0)) * std::conj(out.lambda(1, a));
    }
    return out;
}

InverseCoefficientSet lambda_coefficients_grid(const OscillatorPair& pair,
                                               const ModeGrid& grid, int target) {
    const Mode& tm = grid.modes[target];
    InverseCoefficientSet out;
    double k = tm.k, k0 = pair.k0;
    Vec3 rvec{0.0, 0.0, pair.r};
    complexd phm = std::exp(complexd(0.0, -dot(tm.kvec, rvec)));
    for (int a = 0; a < 3; ++a) {
        Axis axis = static_cast<Axis>(a);
        GridDressing d = grid_dressing(pair, grid, axis, target);
        complexd den = complexd(1.0, 0.0) - d.sig * d.sig / (d.inv_g1 * d.inv_g2);
        complexd f1 = coupling_constant(pair, 1, axis, tm, grid.volume);
        complexd f2 = coupling_constant(pair, 2, axis, tm, grid.volume);
        out.lambda(0, a) = (k + k0) / (d.inv_g1 * den) * (f1 - f2 * phm * d.sig / d.inv_g2);
        out.lambda(1, a) = (k + k0) / (d.inv_g2 * den) * (f2 * phm - f1 * d.sig / d.inv_g1);
        out.tau(0, a) = -((k - k0) / (k + k0)) * std::conj(out.lambda(0, a));
        out.tau(1, a) = -((k - k0) / (k + k0)) * std::conj(out.lambda(1, a));
    }
    out.target = target;
    return out;
}

void companion_coefficients(InverseCoefficientSet& coeffs, const OscillatorPair& pair,
                            const ModeGrid& grid) {
    if (coeffs.target < 0) throw std::invalid_argument("companion_coefficients: no target");
    int N = static_cast<int>(grid.modes.size());
    const Mode& tm = grid.modes[coeffs.target];
    double kp = tm.k, k0 = pair.k0;
    Vec3 rvec{0.0, 0.0, pair.r};
    coeffs.mu_smooth = Eigen::VectorXcd::Zero(N);
    coeffs.eta = Eigen::VectorXcd::Zero(N);
    for (int m = 0; m < N; ++m) {
        const Mode& mm = grid.modes[m];
        if (same_shell(mm.k, kp)) continue;  // pole row: delta-only by convention
        complexd ph = std::exp(complexd(0.0, dot(mm.kvec, rvec)));
        complexd s = 0.0;
        for (int a = 0; a < 3; ++a) {
            Axis axis = static_cast<Axis>(a);
            complexd f1 = coupling_constant(pair, 1, axis, mm, grid.volume);
            complexd f2 = coupling_constant(pair, 2, axis, mm, grid.volume);
            s += f1 * coeffs.lambda(0, a) + ph * f2 * coeffs.lambda(1, a);
        }
        coeffs.mu_smooth(m) = (2.0 * k0 / ((kp + k0) * (kp - mm.k))) * s;
    }
    for (int m = 0; m < N; ++m) {
        const Mode& mm = grid.modes[m];
        int am = antipode_index(grid, m);
        if (am < 0) continue;  // no antipodal partner on this grid
        complexd mu_full = coeffs.mu_smooth(am);
        if (am == coeffs.target) mu_full += 1.0;
        coeffs.eta(m) = ((kp - mm.k) / (kp + mm.k)) * std::conj(mu_full);
    }
}

} // namespace cpq
