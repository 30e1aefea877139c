#pragma once
#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

namespace cpq {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 400;
    // eta ladder for oscillatory damping, in units of 1/r: eta = ladder[i]/r
    std::array<double, 3> damping_ladder{1.0 / 16, 1.0 / 32, 1.0 / 64};
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

struct QuadratureError : std::runtime_error {
    double achieved;
    QuadratureError(const std::string& msg, double err)
        : std::runtime_error(msg), achieved(err) {}
};

using Fn = std::function<double(double)>;

// Single Gauss-Kronrod 15-point panel on [a,b]; err from the embedded G7 rule.
QuadResult gk15(const Fn& f, double a, double b);

// Globally adaptive bisection on [a,b].
QuadResult integrate_adaptive(const Fn& f, double a, double b, const QuadratureConfig& cfg);

// Semi-infinite tail [a, inf) for integrands with decaying envelope: fixed-size
// chunks integrated adaptively and summed until chunk contributions are
// negligible. chunk should track the integrand's oscillation period.
QuadResult integrate_tail(const Fn& f, double a, double chunk, const QuadratureConfig& cfg);

// Oscillatory tail [a, inf): integrate fixed half-period chunks and sum the
// near-alternating chunk series with repeated averaging (Euler/van Wijngaarden).
// Handles Abel-regularized tails with slowly varying envelopes.
QuadResult euler_tail(const Fn& f, double a, double chunk, int nchunks,
                      const QuadratureConfig& cfg);

// Polynomial extrapolation of samples (x_i, y_i) to x = 0 (Neville scheme).
double extrapolate_to_zero(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace cpq
