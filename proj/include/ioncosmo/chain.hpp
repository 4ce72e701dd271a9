#pragma once

#include <vector>

#include "ioncosmo/linalg.hpp"

namespace ioncosmo {

// Static structure of N ions in a harmonic axial trap with pairwise Coulomb
// repulsion, in dimensionless equilibrium units: lengths are scaled so the
// trap and Coulomb coefficients are both 1, making the equilibrium condition
// u_i = sum_{j != i} sign(i - j) / (u_i - u_j)^2.
struct ChainConfiguration {
    int n_ions = 0;
    std::vector<double> positions;       // ascending, antisymmetric about 0
    linalg::Matrix hessian;              // dimensionless curvature matrix A
    std::vector<double> mode_freqs_sq;   // eigenvalues of A, ascending
    linalg::Matrix mode_vectors;         // column kappa pairs with mode_freqs_sq[kappa]
    double equilibrium_residual = 0.0;   // max |force| at the solution
};

// Largest residual force component at positions u.
double force_residual(const std::vector<double>& u);

// Newton iteration for the equilibrium positions. Deterministic: starts from
// uniformly spaced seeds, enforces the mirror symmetry u_i = -u_{N+1-i} at
// every iterate, and damps steps that fail to reduce the residual.
std::vector<double> solve_equilibrium(int n_ions, double tol = 1e-12);

// Curvature of the Coulomb part of the potential at ordered positions:
// A_ii = 2 sum_{j != i} |u_i - u_j|^-3, A_ij = -2 |u_i - u_j|^-3. Row sums
// vanish, so (1,...,1) is always a zero mode (center of mass). Eigenvalues
// are the squared mode-frequency offsets omega_kappa^2 in axial units; the
// full mode frequency at rest is omega_ax^2 (1 + omega_kappa^2). At the
// equilibrium positions A u = 2 u (the breathing mode).
linalg::Matrix coulomb_hessian(const std::vector<double>& positions);

// Eigen-decomposition of the Hessian with the zero-mode guard: eigenvalues
// within clamp_tol of zero are clamped to exactly zero (the center-of-mass
// value), anything more negative is an error.
struct NormalModes {
    std::vector<double> freqs_sq;
    linalg::Matrix vectors;
};
NormalModes normal_modes(const linalg::Matrix& hessian, double clamp_tol = 1e-9);

// Full static analysis: equilibrium, Hessian, modes.
ChainConfiguration analyze_chain(int n_ions, double tol = 1e-12);

} // namespace ioncosmo
