#pragma once
#include "cpq/model.hpp"
#include "cpq/quadrature.hpp"

namespace cpq {

enum class Branch { Plus, Minus };

enum class CutoffKind { Exponential, Sharp };

struct CutoffScheme {
    CutoffKind kind = CutoffKind::Exponential;
    double lambda = 100.0;  // in units of k0

    double damp(double k) const {
        if (kind == CutoffKind::Exponential) return std::exp(-k / lambda);
        return k <= lambda ? 1.0 : 0.0;
    }
};

struct BranchedValue {
    complexd value;
    Branch branch;
};

// (G_i(k +- ieps))^{-1} = k0^2 - k^2 - (4/3pi) k0 mu_i^2 PV Int dk' 2k'^4 D(k')/(k'^2-k^2)
//                         -+ i (4/3) k0 mu_i^2 k^3 D(k)
complexd inverse_g(const OscillatorPair& pair, int which, double k, Branch branch,
                   const CutoffScheme& cutoff, const QuadratureConfig& quad);

// sigma_l(k +- ieps, r) = -(2/pi) k0 mu1 mu2 [ PV Int dk' 2k'^4 h_l(k'r)/(k'^2-k^2)
//                         +- i pi k^3 h_l(kr) ]
// Real part: eta-damped quadrature extrapolated eta -> 0 over the damping ladder.
complexd sigma(const OscillatorPair& pair, Axis axis, double k, Branch branch,
               const QuadratureConfig& quad);

// Imaginary-frequency counterparts used by the potential path (k -> i xi).
// inverse_g_imag: if renormalized, the self-energy carries a static subtraction
// Sig(xi) - Sig(0), pinning G_i(0) = 1/k0^2 (observed static polarizability).
double inverse_g_imag(const OscillatorPair& pair, int which, double xi,
                      const CutoffScheme& cutoff, const QuadratureConfig& quad,
                      bool renormalized);

double sigma_imag(const OscillatorPair& pair, Axis axis, double xi,
                  const QuadratureConfig& quad);

// Closed forms of the imaginary-frequency sigma (test oracle):
//   sigma_x(i xi) =  (2 k0 mu1 mu2 / r^3) e^{-n} (1 + n + n^2),  n = xi r
//   sigma_z(i xi) = -(4 k0 mu1 mu2 / r^3) e^{-n} (1 + n)
double sigma_imag_closed(const OscillatorPair& pair, Axis axis, double xi);

// Discrete-grid sums with the same normalization as the continuum functions:
//   inverse_g: k0^2 - k^2 + 2 k0 sum_m (f^{il})^2 2 k_m/(k_m^2 - k^2)
//   sigma:              2 k0 sum_m f^1 f^2 cos(k_m.r) 2 k_m/(k_m^2 - k^2)
// Non-degenerate grids only (|k_m - k| bounded away from 0).
complexd grid_inverse_g(const OscillatorPair& pair, int which, const ModeGrid& grid,
                        Axis axis, double k);
complexd grid_sigma(const OscillatorPair& pair, const ModeGrid& grid, Axis axis, double k);

// Closed-form right-hand sides of the partial-fraction sum identities, exact on
// any finite non-degenerate grid when fed the grid G/sigma (and exact in the
// continuum with the continuum ones).
struct IdentityRhs {
    complexd upper;  // same-oscillator family
    complexd lower;  // cross family
};

IdentityRhs identity_f1(const OscillatorPair& pair, int which, Axis axis,
                        double kprime, double ktilde, const ModeGrid& grid);
IdentityRhs identity_f2(const OscillatorPair& pair, int which, Axis axis,
                        double kprime, double ktilde, const ModeGrid& grid);

// The left sides: mode sums of the partial-fraction kernels
//   F1(k) = 1/((k'-k)(kt-k)) - 1/((kt+k)(k'+k))
//   F2(k) = 1/((k'-k)(kt+k)) + 1/((kt-k)(k'+k))
// weighted by (f^{il})^2 (upper) and f^1 f^2 e^{ik.r} (lower); the F2 family
// additionally carries a factor k under the sum.
IdentityRhs identity_f1_lhs(const OscillatorPair& pair, int which, Axis axis,
                            double kprime, double ktilde, const ModeGrid& grid);
IdentityRhs identity_f2_lhs(const OscillatorPair& pair, int which, Axis axis,
                            double kprime, double ktilde, const ModeGrid& grid);

} // namespace cpq
