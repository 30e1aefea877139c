#pragma once
#include <Eigen/Dense>

#include "cpq/resolvent.hpp"

namespace cpq {

struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// M_l = (G1 G2 / (1 - sigma_l^2 G1 G2)) [[1/G2, -sigma],[-sigma, 1/G1]]
//     = inverse of [[1/G1, sigma],[sigma, 1/G2]]
struct MixMatrix {
    Eigen::Matrix2cd m;
    complexd inv_g1, inv_g2, sig;  // the ingredients, kept for diagnostics
};

MixMatrix mix_matrix_from(complexd inv_g1, complexd inv_g2, complexd sig);

MixMatrix mix_matrix(const OscillatorPair& pair, Axis axis, double k, Branch branch,
                     const CutoffScheme& cutoff, const QuadratureConfig& quad);

// On-grid effective dressing at the wavenumber of grid mode `target`:
// modes on the target's shell contribute with kernel +1/(2 k_t) (they enter the
// transformed mode only through R), all others with 2 k_m/(k_m^2 - k_t^2).
// With this dressing the closed forms reproduce the exact finite-grid algebra.
struct GridDressing {
    complexd inv_g1, inv_g2, sig;
};
GridDressing grid_dressing(const OscillatorPair& pair, const ModeGrid& grid, Axis axis,
                           int target);

// Direct coefficients {t, r, T, R} for one transformed mode over a grid.
struct CoefficientSet {
    Eigen::Matrix<complexd, 2, 3> t;  // [oscillator][axis]
    Eigen::Matrix<complexd, 2, 3> r;
    Eigen::VectorXcd T;               // per grid mode (delta included)
    Eigen::VectorXcd R;
    int target = -1;
};

CoefficientSet direct_coefficients(const OscillatorPair& pair, const ModeGrid& grid,
                                   int target);

// Inverse coefficients. lambda/tau per (oscillator, axis) for one transformed
// mode; mu/eta stored delta-plus-smooth over a grid.
struct InverseCoefficientSet {
    Eigen::Matrix<complexd, 2, 3> lambda;
    Eigen::Matrix<complexd, 2, 3> tau;
    Eigen::VectorXcd mu_smooth;  // mu = delta + mu_smooth
    Eigen::VectorXcd eta;
    int target = -1;
};

// Continuum closed form at an off-grid mode (volume-normalized couplings).
InverseCoefficientSet lambda_coefficients(const OscillatorPair& pair, const Mode& mode,
                                          double volume, Branch branch,
                                          const CutoffScheme& cutoff,
                                          const QuadratureConfig& quad);

// Grid closed form with the shell-exclusion dressing (lambda/tau only).
InverseCoefficientSet lambda_coefficients_grid(const OscillatorPair& pair,
                                               const ModeGrid& grid, int target);

// Fills mu (smooth part) and eta from the lambda part over the grid.
// Modes on the target shell keep mu = delta (pole row excluded by design).
void companion_coefficients(InverseCoefficientSet& coeffs, const OscillatorPair& pair,
                            const ModeGrid& grid);

} // namespace cpq
