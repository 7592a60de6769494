#pragma once

#include "sparsegain/linalg.hpp"
#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"

namespace sparsegain {

/// Everything the descent methods need at a fixed gain: the closed-loop Schur
/// factorization (shared by all Lyapunov solves at this gain), the Gramians,
/// the objective and its gradient. Instability is encoded as j = +inf so line
/// searches can reject a step without special cases.
struct H2Eval {
  GainMatrix f;
  Matrix acl;
  SchurForm schur;
  double alpha = 0.0;  // spectral abscissa of acl
  double j = 0.0;      // trace(B1ᵀ P B1), or +inf when acl is not Hurwitz
  Matrix p;            // observability Gramian: Aclᵀ P + P Acl = −(Q + FᵀRF)
  Matrix l;            // controllability Gramian: Acl L + L Aclᵀ = −B1B1ᵀ (lazy)
  Matrix grad;         // ∇J = 2 (RF − B2ᵀP) L (lazy)

  bool stable() const { return alpha < 0.0; }
  bool has_gradient() const { return !grad.empty(); }
};

/// Closed-loop factorization, Gramian P and objective value at F.
H2Eval evaluate(const Plant& plant, const GainMatrix& f);

/// Fill in L and ∇J; throws StabilityError when F is not stabilizing.
void ensure_gradient(const Plant& plant, H2Eval& eval);

/// Closed-loop H2 cost (squared norm); +inf when A − B2 F is not Hurwitz.
double objective(const Plant& plant, const GainMatrix& f);

GainMatrix gradient(const Plant& plant, const GainMatrix& f);

/// Second-derivative action H(F, F̃), linear in the direction F̃.
GainMatrix hessian_apply(const Plant& plant, const GainMatrix& f, const GainMatrix& dir);

/// Same, reusing the factorization and Gramians cached in `eval`.
GainMatrix hessian_apply(const Plant& plant, H2Eval& eval, const GainMatrix& dir);

}  // namespace sparsegain
