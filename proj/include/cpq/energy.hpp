#pragma once
#include "cpq/discrete_oracle.hpp"

namespace cpq {

enum class PotentialOrder { FourthOrderFarZone, AllOrdersNumeric };

struct PotentialSample {
    double r = 0.0;    // in 1/k0
    double v = 0.0;    // in k0
    double v4 = 0.0;   // fourth-order reference at the same r
    double err = 0.0;  // quadrature error estimate (0 for closed forms)
    bool converged = true;
};

struct PotentialCurve {
    PotentialOrder order;
    std::vector<PotentialSample> samples;
};

// The transformed-mode energy sum split into the r-independent single-oscillator part and the
// r-dependent cross part. The split is exact: cross = E0(mu1,mu2) - E0(mu1,0)
// - E0(0,mu2) on the same grid, so no bracket bookkeeping is needed.
struct EnergyBreakdown {
    double total = 0.0;
    double single_atom_part = 0.0;
    double cross_part = 0.0;
    double imag_residue = 0.0;  // |Im| of the energy mode sum, should be ~0
};

// Ground-energy mode sum over all transformed modes, with the
// exact finite-model coefficients from the BdG eigenproblem. (The continuum-
// style closed forms are not a valid source here: they only cover the
// field-like transformed modes, and the six dressed-oscillator modes
// contribute at the same order as the total.) imag_residue (optional out)
// reports the magnitude of the accumulated imaginary part.
double e0_eq13(const OscillatorPair& pair, const ModeGrid& grid,
               double* imag_residue = nullptr);

EnergyBreakdown e0_discrete(const OscillatorPair& pair, const ModeGrid& grid);

// The far-zone integrals: double integrals over (x, y) of
//   x^2 y^4 / (x^2 - y^2) [x j0(x) u(y) + j1(x) w(y)],  u = j0 - j1/y,
//   w = 3 j1/y - j0
// with a PV prescription on the inner y integral (I1), resp. the same kernel
// with 1/(x + y)^2 and no PV (I2). Oscillatory tails are summed with
// Euler-accelerated half-period chunking at both levels.
double integral_I1(const QuadratureConfig& quad);
double integral_I2(const QuadratureConfig& quad);

// -23 alpha1 alpha2 / (4 pi r^7)
double vcp_fourth_order_at(const OscillatorPair& pair, double r);

// (16 mu1^2 mu2^2 / pi^2 k0^2) (2 I1 + I2) / r^7 -- the pre-reduction form,
// for the route-equality check against vcp_fourth_order_at.
double vcp_fourth_order_from_integrals(const OscillatorPair& pair, double r,
                                       double i1, double i2);

PotentialCurve vcp_fourth_order(const OscillatorPair& pair,
                                const std::vector<double>& r_samples);

// All-orders r-dependent energy at one separation: exact resummation of the
// cross part as a frequency integral over the imaginary axis,
//   V(r) = (1/2pi) sum_l int_0^inf dxi ln(1 - sigma_l(i xi, r)^2 G1 G2),
// with statically renormalized resolvents (G_i(0) = 1/k0^2).
double vcp_all_orders_at(const OscillatorPair& pair, double r,
                         const CutoffScheme& cutoff, const QuadratureConfig& quad,
                         double* err_est = nullptr);

PotentialCurve vcp_all_orders(const OscillatorPair& pair,
                              const std::vector<double>& r_samples,
                              const CutoffScheme& cutoff, const QuadratureConfig& quad);

// Least-squares slope of log|V| vs log r over a curve (power-law diagnostic).
double loglog_slope(const PotentialCurve& curve);

} // namespace cpq
