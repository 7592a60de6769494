#pragma once

#include <complex>
#include <vector>

#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"

namespace sparsegain {

/// Real Schur decomposition A = U T Uᵀ with U orthogonal and T quasi upper
/// triangular (1x1 and 2x2 diagonal blocks, 2x2 blocks carrying complex
/// conjugate eigenvalue pairs).
struct SchurForm {
  Matrix u;  // empty when the decomposition was computed without accumulation
  Matrix t;
};

/// Hessenberg reduction followed by Francis double-shift QR iteration.
/// Deflation threshold 1e-12 relative, at most 100·n sweeps.
SchurForm real_schur(const Matrix& a, bool want_u = true);

/// Eigenvalues read off the quasi-triangular factor.
std::vector<std::complex<double>> schur_eigenvalues(const Matrix& t);

/// Largest real part over the eigenvalues of M. Negative iff M is Hurwitz.
double spectral_abscissa(const Matrix& m);
double spectral_abscissa(const SchurForm& schur);

/// Solve Aᵀ P + P A = −Rhs with A Hurwitz and Rhs symmetric
/// (Bartels–Stewart on the real Schur form of A). Output is symmetrized.
Matrix solve_lyapunov(const Matrix& acl, const Matrix& rhs);
Matrix solve_lyapunov(const SchurForm& schur, const Matrix& rhs);

/// Solve A L + L Aᵀ = −Rhs, the dual (controllability) form.
Matrix solve_dual_lyapunov(const Matrix& acl, const Matrix& rhs);
Matrix solve_dual_lyapunov(const SchurForm& schur, const Matrix& rhs);

/// Eigendecomposition of a symmetric matrix: A = V diag(values) Vᵀ,
/// values ascending. Householder tridiagonalization + implicit-shift QL.
struct SymmetricEig {
  Matrix vectors;
  std::vector<double> values;
};
SymmetricEig sym_eig(const Matrix& a);

/// Solve 2 R F L + ρ F = Rhs for F, with R symmetric positive definite and
/// L symmetric positive semidefinite, via the eigendecompositions of R and L
/// and elementwise division in the diagonalizing bases.
Matrix solve_spd_sylvester(const Matrix& r, const Matrix& l, double rho, const Matrix& rhs);
Matrix solve_spd_sylvester(const SymmetricEig& r_eig, const SymmetricEig& l_eig, double rho,
                           const Matrix& rhs);

/// Solve A X = B for square A by LU factorization with partial pivoting.
Matrix solve_linear(const Matrix& a, const Matrix& b);

/// Stabilizing solution of AᵀP + PA + Q − P B2 R⁻¹ B2ᵀ P = 0 and the
/// centralized gain Fc = R⁻¹ B2ᵀ P. Extracts the stable invariant subspace of
/// the 2n x 2n Hamiltonian via an ordered real Schur form, then applies one
/// Newton–Kleinman refinement step.
struct AreSolution {
  Matrix p;
  GainMatrix gain;
};
AreSolution solve_are(const Plant& plant);

}  // namespace sparsegain
