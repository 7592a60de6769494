#pragma once

#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"

namespace sparsegain {

struct PolishOptions {
  double grad_tol = 1e-6;    // on ‖∇J ∘ I_S‖_F, scaled by max(1, ‖F‖_F)
  int max_newton = 100;
  double cg_rel_tol = 1e-6;  // relative residual for the Newton system
  double armijo_c = 1e-4;
  double backtrack = 0.5;
};

struct PolishResult {
  GainMatrix f;
  double j = 0.0;
  int newton_iters = 0;
  bool converged = false;
  std::vector<double> j_history;  // objective at F0 and at each accepted iterate
};

/// Minimize J over gains confined to the mask support, by Newton's method
/// with the direction computed by conjugate gradients on the masked Hessian.
/// Negative curvature truncates CG (steepest descent on the first step);
/// an Armijo backtracking line search rejects unstable candidates.
/// Requires a structured, stabilizing initial gain.
PolishResult polish_gain(const Plant& plant, const StructureMask& mask, const GainMatrix& f0,
                         const PolishOptions& opts = {});

/// Projection onto the structural subspace: F ∘ mask.
GainMatrix project_structure(const GainMatrix& f, const StructureMask& mask);

}  // namespace sparsegain
