#include "cpq/discrete_oracle.hpp"

#include <random>

namespace cpq {

namespace {

constexpr double kShellTol = 1e-9;

bool same_shell(double ka, double kb) {
    return std::abs(ka - kb) <= kShellTol * std::max(1.0, std::max(ka, kb));
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

// Deterministic polarization pair orthogonal to khat; antipodal directions get
// the pair of their canonical (lexicographically larger) representative.
std::pair<Vec3, Vec3> pol_pair(Vec3 khat) {
    Vec3 rep = khat;
    Vec3 anti{-khat[0], -khat[1], -khat[2]};
    auto less = [](const Vec3& a, const Vec3& b) {
        for (int i = 0; i < 3; ++i) {
            if (a[i] < b[i] - 1e-14) return true;
            if (a[i] > b[i] + 1e-14) return false;
        }
        return false;
    };
    if (less(rep, anti)) rep = anti;
    Vec3 seed{0.0, 0.0, 1.0};
    if (std::abs(dot(seed, rep)) > 0.9) seed = {1.0, 0.0, 0.0};
    Vec3 e1 = normalized(cross(rep, seed));
    Vec3 e2 = cross(rep, e1);
    return {e1, e2};
}

std::vector<Vec3> direction_set(int directions, unsigned seed) {
    std::vector<Vec3> dirs;
    auto add_signed = [&](double x, double y, double z) {
        Vec3 v = normalized(Vec3{x, y, z});
        dirs.push_back(v);
        dirs.push_back({-v[0], -v[1], -v[2]});
    };
    if (directions == 6 || directions == 14 || directions == 26) {
        add_signed(1, 0, 0);
        add_signed(0, 1, 0);
        add_signed(0, 0, 1);
        if (directions >= 14)
            for (double sx : {1.0, -1.0})
                for (double sy : {1.0, -1.0}) add_signed(sx, sy, 1.0);
        if (directions == 26) {
            for (double s : {1.0, -1.0}) {
                add_signed(s, 1, 0);
                add_signed(s, 0, 1);
                add_signed(0, s, 1);
            }
        }
    } else {
        if (directions < 2 || directions % 2 != 0)
            throw std::invalid_argument("direction count must be even and >= 2");
        std::mt19937 rng(seed);
        std::normal_distribution<double> gauss;
        for (int i = 0; i < directions / 2; ++i) {
            Vec3 v = normalized(Vec3{gauss(rng), gauss(rng), gauss(rng)});
            dirs.push_back(v);
            dirs.push_back({-v[0], -v[1], -v[2]});
        }
    }
    return dirs;
}

} // namespace

ModeGrid make_shell_grid(const ShellGridSpec& spec) {
    if (spec.n_shells < 1 || !(spec.k_min > 0) || !(spec.k_max >= spec.k_min))
        throw std::invalid_argument("make_shell_grid: bad shell ladder");
    std::vector<Vec3> dirs = direction_set(spec.directions, spec.seed);
    int nd = static_cast<int>(dirs.size());
    double dOmega = 4.0 * M_PI / nd;

    std::vector<double> ks(spec.n_shells), dks(spec.n_shells);
    if (spec.n_shells == 1) {
        ks[0] = spec.k_min;
        dks[0] = spec.k_max - spec.k_min > 0 ? spec.k_max - spec.k_min : 1.0;
    } else if (spec.ladder == ShellGridSpec::Ladder::Uniform) {
        double dk = (spec.k_max - spec.k_min) / (spec.n_shells - 1);
        for (int i = 0; i < spec.n_shells; ++i) {
            ks[i] = spec.k_min + i * dk;
            dks[i] = dk;
        }
    } else {
        double q = std::pow(spec.k_max / spec.k_min, 1.0 / (spec.n_shells - 1));
        for (int i = 0; i < spec.n_shells; ++i) {
            ks[i] = spec.k_min * std::pow(q, i);
            dks[i] = ks[i] * (std::sqrt(q) - 1.0 / std::sqrt(q));
        }
    }

    ModeGrid grid;
    grid.volume = 1.0;
    for (int i = 0; i < spec.n_shells; ++i) {
        double cell = ks[i] * ks[i] * dks[i] * dOmega / std::pow(2.0 * M_PI, 3);
        for (const Vec3& d : dirs) {
            auto [e1, e2] = pol_pair(d);
            for (const Vec3& e : {e1, e2}) {
                Mode m;
                m.kvec = {ks[i] * d[0], ks[i] * d[1], ks[i] * d[2]};
                m.pol = e;
                m.k = ks[i];
                m.weight = cell;
                grid.modes.push_back(m);
            }
        }
    }
    return grid;
}

LinearSystem build_system(const OscillatorPair& pair, const ModeGrid& grid, int target) {
    int N = static_cast<int>(grid.modes.size());
    if (target < 0 || target >= N) throw std::invalid_argument("build_system: bad target");
    double kt = grid.modes[target].k, k0 = pair.k0;
    if (std::abs(kt - k0) < 1e-9)
        throw std::invalid_argument("build_system: degenerate grid (k = k0)");

    LinearSystem sys;
    sys.target = target;
    for (int m = 0; m < N; ++m)
        if (!same_shell(grid.modes[m].k, kt)) sys.nonshell.push_back(m);
    int nT = static_cast<int>(sys.nonshell.size());
    int dim = 12 + nT + N;
    sys.A = Eigen::MatrixXcd::Zero(dim, dim);
    sys.rhs = Eigen::VectorXcd::Zero(dim);

    // unknown layout: t[i][l] at 3i+l, r[i][l] at 6+3i+l, T at 12.., R at 12+nT..
    std::vector<int> t_index(N, -1);
    for (int j = 0; j < nT; ++j) t_index[sys.nonshell[j]] = 12 + j;
    auto r_index = [&](int m) { return 12 + nT + m; };

    Vec3 rvec{0.0, 0.0, pair.r};
    std::vector<std::array<complexd, 6>> f(N);   // [mode][osc*3+axis]
    std::vector<complexd> ph(N);
    for (int m = 0; m < N; ++m) {
        for (int i = 0; i < 2; ++i)
            for (int a = 0; a < 3; ++a)
                f[m][3 * i + a] = coupling_constant(pair, i + 1, static_cast<Axis>(a),
                                                    grid.modes[m], grid.volume);
        ph[m] = std::exp(complexd(0.0, dot(grid.modes[m].kvec, rvec)));
    }

    int row = 0;
    // oscillator rows: (k -+ k0) t/r = sum_m f_m (T_m ph^i_m + R_m conj(ph^i_m))
    for (int i = 0; i < 2; ++i) {
        for (int a = 0; a < 3; ++a) {
            for (int sgn : {-1, +1}) {  // -1 -> t row, +1 -> r row
                int idx = (sgn < 0 ? 0 : 6) + 3 * i + a;
                sys.A(row, idx) = kt + sgn * k0;
                for (int m = 0; m < N; ++m) {
                    complexd pT = (i == 1) ? ph[m] : complexd(1.0);
                    complexd pR = (i == 1) ? std::conj(ph[m]) : complexd(1.0);
                    complexd fm = f[m][3 * i + a];
                    if (t_index[m] >= 0)
                        sys.A(row, t_index[m]) -= fm * pT;
                    else if (m == target)
                        sys.rhs(row) += fm * pT;  // frozen T = delta on the shell
                    sys.A(row, r_index(m)) -= fm * pR;
                }
                ++row;
            }
        }
    }
    // T rows for non-shell modes
    for (int m : sys.nonshell) {
        sys.A(row, t_index[m]) = kt - grid.modes[m].k;
        for (int i = 0; i < 2; ++i) {
            complexd p = (i == 1) ? std::conj(ph[m]) : complexd(1.0);
            for (int a = 0; a < 3; ++a) {
                sys.A(row, 3 * i + a) += f[m][3 * i + a] * p;
                sys.A(row, 6 + 3 * i + a) -= f[m][3 * i + a] * p;
            }
        }
        ++row;
    }
    // R rows for all modes
    for (int m = 0; m < N; ++m) {
        sys.A(row, r_index(m)) = -(kt + grid.modes[m].k);
        for (int i = 0; i < 2; ++i) {
            complexd p = (i == 1) ? ph[m] : complexd(1.0);
            for (int a = 0; a < 3; ++a) {
                sys.A(row, 3 * i + a) += f[m][3 * i + a] * p;
                sys.A(row, 6 + 3 * i + a) -= f[m][3 * i + a] * p;
            }
        }
        ++row;
    }
    return sys;
}

CoefficientSet solve_system(const OscillatorPair& pair, const ModeGrid& grid, int target) {
    LinearSystem sys = build_system(pair, grid, target);
    Eigen::VectorXcd x = sys.A.partialPivLu().solve(sys.rhs);
    int N = static_cast<int>(grid.modes.size());
    int nT = static_cast<int>(sys.nonshell.size());

    CoefficientSet out;
    out.target = target;
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 3; ++a) {
            out.t(i, a) = x(3 * i + a);
            out.r(i, a) = x(6 + 3 * i + a);
        }
    out.T = Eigen::VectorXcd::Zero(N);
    out.R = Eigen::VectorXcd::Zero(N);
    out.T(target) = 1.0;
    for (int j = 0; j < nT; ++j) out.T(sys.nonshell[j]) = x(12 + j);
    for (int m = 0; m < N; ++m) out.R(m) = x(12 + nT + m);
    return out;
}

double commutator_residual(const CoefficientSet& coeffs) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 3; ++a)
            s += std::norm(coeffs.t(i, a)) - std::norm(coeffs.r(i, a));
    for (int m = 0; m < coeffs.T.size(); ++m)
        s += std::norm(coeffs.T(m)) - std::norm(coeffs.R(m));
    return std::abs(s - 1.0);
}

SymplecticResult diagonalize_quadratic(const OscillatorPair& pair, const ModeGrid& grid) {
    int N = static_cast<int>(grid.modes.size());
    int D = 6 + N;
    Vec3 rvec{0.0, 0.0, pair.r};

    // H = 1/2 z^T S z - 1/2 (6 k0 + sum k), z = (x_osc, x_B, p_osc, p_B).
    // Couplings: f (a + a^d)(B - B^d) with f = -i g gives 2 g x p_B for
    // oscillator 1 and 2 g (cos phi p_B + sin phi x_B) x for oscillator 2.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * D, 2 * D);
    for (int i = 0; i < 6; ++i) S(i, i) = S(D + i, D + i) = pair.k0;
    for (int m = 0; m < N; ++m)
        S(6 + m, 6 + m) = S(D + 6 + m, D + 6 + m) = grid.modes[m].k;
    for (int m = 0; m < N; ++m) {
        double phi = dot(grid.modes[m].kvec, rvec);
        for (int a = 0; a < 3; ++a) {
            double g1 = -std::imag(coupling_constant(pair, 1, static_cast<Axis>(a),
                                                     grid.modes[m], grid.volume));
            double g2 = -std::imag(coupling_constant(pair, 2, static_cast<Axis>(a),
                                                     grid.modes[m], grid.volume));
            S(a, D + 6 + m) += 2 * g1;
            S(D + 6 + m, a) += 2 * g1;
            S(3 + a, D + 6 + m) += 2 * g2 * std::cos(phi);
            S(D + 6 + m, 3 + a) += 2 * g2 * std::cos(phi);
            S(3 + a, 6 + m) += 2 * g2 * std::sin(phi);
            S(6 + m, 3 + a) += 2 * g2 * std::sin(phi);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> chk(S);
    if (chk.eigenvalues()(0) <= 0)
        throw std::runtime_error(
            "diagonalize_quadratic: quadratic form not positive definite "
            "(overcritical coupling for this grid)");

    Eigen::MatrixXd OmS = Eigen::MatrixXd::Zero(2 * D, 2 * D);
    OmS.topRows(D) = S.bottomRows(D);
    OmS.bottomRows(D) = -S.topRows(D);
    Eigen::EigenSolver<Eigen::MatrixXd> es(OmS, false);
    std::vector<double> w(2 * D);
    for (int i = 0; i < 2 * D; ++i) w[i] = std::abs(es.eigenvalues()(i).imag());
    std::sort(w.begin(), w.end());

    SymplecticResult out;
    out.freqs.resize(D);
    double sum = 0.0;
    for (int i = 0; i < D; ++i) {
        out.freqs(i) = w[2 * i];  // each frequency appears as an +-i omega pair
        sum += out.freqs(i);
    }
    double bare = 6.0 * pair.k0;
    for (const Mode& m : grid.modes) bare += m.k;
    out.e0 = 0.5 * (sum - bare);
    return out;
}

BdgCoefficients bdg_coefficients(const OscillatorPair& pair, const ModeGrid& grid) {
    int N = static_cast<int>(grid.modes.size());
    int D = 6 + N;
    Vec3 rvec{0.0, 0.0, pair.r};

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(D, D);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(D, D);
    for (int i = 0; i < 6; ++i) A(i, i) = pair.k0;
    for (int m = 0; m < N; ++m) A(6 + m, 6 + m) = grid.modes[m].k;
    for (int m = 0; m < N; ++m) {
        double phi = dot(grid.modes[m].kvec, rvec);
        complexd eip = std::exp(complexd(0.0, phi));
        for (int a = 0; a < 3; ++a) {
            complexd f1 = coupling_constant(pair, 1, static_cast<Axis>(a),
                                            grid.modes[m], grid.volume);
            complexd f2 = coupling_constant(pair, 2, static_cast<Axis>(a),
                                            grid.modes[m], grid.volume);
            A(a, 6 + m) += f1;
            A(6 + m, a) += std::conj(f1);
            B(a, 6 + m) += -f1;
            B(6 + m, a) += -f1;
            A(3 + a, 6 + m) += f2 * eip;
            A(6 + m, 3 + a) += std::conj(f2 * eip);
            B(3 + a, 6 + m) += -f2 * std::conj(eip);
            B(6 + m, 3 + a) += -f2 * std::conj(eip);
        }
    }

    Eigen::MatrixXcd K(2 * D, 2 * D);
    K.topLeftCorner(D, D) = A;
    K.topRightCorner(D, D) = B;
    K.bottomLeftCorner(D, D) = -B.conjugate();
    K.bottomRightCorner(D, D) = -A.conjugate();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K, true);
    struct ModeVec {
        double omega;
        Eigen::VectorXcd u, v;
    };
    std::vector<ModeVec> sel;
    for (int i = 0; i < 2 * D; ++i) {
        if (es.eigenvalues()(i).real() > 0) {
            ModeVec mv;
            mv.omega = es.eigenvalues()(i).real();
            mv.u = es.eigenvectors().col(i).head(D);
            mv.v = es.eigenvectors().col(i).tail(D);
            sel.push_back(std::move(mv));
        }
    }
    if (static_cast<int>(sel.size()) != D)
        throw std::runtime_error("bdg_coefficients: positive-frequency sector has wrong size");
    std::sort(sel.begin(), sel.end(),
              [](const ModeVec& a, const ModeVec& b) { return a.omega < b.omega; });

    // Gram-Schmidt with the indefinite metric <w,w'> = u^H u' - v^H v' inside
    // degenerate frequency clusters; distinct frequencies are orthogonal already.
    auto metric = [](const ModeVec& a, const ModeVec& b) {
        return (a.u.adjoint() * b.u - a.v.adjoint() * b.v)(0, 0);
    };
    size_t c0 = 0;
    for (size_t i = 0; i <= sel.size(); ++i) {
        bool closes = (i == sel.size()) ||
                      (i > c0 && sel[i].omega - sel[c0].omega >
                                     1e-8 * std::max(1.0, sel[c0].omega));
        if (closes) {
            for (size_t j = c0; j < i; ++j) {
                for (size_t l = c0; l < j; ++l) {
                    complexd ov = metric(sel[l], sel[j]);
                    sel[j].u -= ov * sel[l].u;
                    sel[j].v -= ov * sel[l].v;
                }
                double nrm = metric(sel[j], sel[j]).real();
                if (nrm <= 0)
                    throw std::runtime_error("bdg_coefficients: negative-norm mode");
                sel[j].u /= std::sqrt(nrm);
                sel[j].v /= std::sqrt(nrm);
            }
            c0 = i;
        }
    }

    BdgCoefficients out;
    out.omega.resize(D);
    out.lambda_osc.resize(D, 6);
    out.tau_osc.resize(D, 6);
    for (int m = 0; m < D; ++m) {
        out.omega(m) = sel[m].omega;
        for (int n = 0; n < 6; ++n) {
            out.lambda_osc(m, n) = std::conj(sel[m].u(n));
            out.tau_osc(m, n) = -sel[m].v(n);
        }
    }
    return out;
}

} // namespace cpq
