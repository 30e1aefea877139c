#pragma once
#include "cpq/bogoliubov.hpp"

namespace cpq {

// Isotropic shell grids: k-shells from a uniform or geometric ladder, each
// represented by an antipodal-symmetric direction set with equal solid-angle
// weights. Antipodal partners share the same polarization pair so that the
// discrete angular sums inherit the continuum delta_{ll'} structure.
struct ShellGridSpec {
    int n_shells = 4;
    double k_min = 0.3;
    double k_max = 3.0;
    enum class Ladder { Uniform, Geometric } ladder = Ladder::Uniform;
    int directions = 6;   // 6, 14 or 26 for the octahedral sets; otherwise random pairs
    unsigned seed = 1;    // used only for random direction sets
};

ModeGrid make_shell_grid(const ShellGridSpec& spec);

// The coupled linear system for one transformed mode. Shell-degenerate rows
// are excluded by design: the target shell's T coefficients are frozen at the
// Kronecker delta and the corresponding rows dropped (see GridDressing).
struct LinearSystem {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd rhs;
    std::vector<int> nonshell;  // grid indices carrying a T unknown
    int target = -1;
};

LinearSystem build_system(const OscillatorPair& pair, const ModeGrid& grid, int target);

// Solves build_system and unpacks into a CoefficientSet.
CoefficientSet solve_system(const OscillatorPair& pair, const ModeGrid& grid, int target);

// | sum |t|^2 - |r|^2 + sum |T|^2 - |R|^2 - 1 |
double commutator_residual(const CoefficientSet& coeffs);

// Symplectic diagonalization of the real quadratic form of the Hamiltonian.
struct SymplecticResult {
    Eigen::VectorXd freqs;  // normal-mode frequencies, ascending
    double e0 = 0.0;        // 1/2 (sum freqs - sum bare)
};

SymplecticResult diagonalize_quadratic(const OscillatorPair& pair, const ModeGrid& grid);

// Exact inverse Bogoliubov coefficients of the finite model from the
// Bogoliubov-de Gennes eigenproblem: a_n^dag = sum_m lambda[m][n] b_m^dag
//                                            + tau[m][n] b_m, restricted to the
// six oscillator columns. omega are the dressed frequencies.
struct BdgCoefficients {
    Eigen::VectorXd omega;        // size D = 6 + N
    Eigen::MatrixXcd lambda_osc;  // D x 6
    Eigen::MatrixXcd tau_osc;     // D x 6
};

BdgCoefficients bdg_coefficients(const OscillatorPair& pair, const ModeGrid& grid);

} // namespace cpq
