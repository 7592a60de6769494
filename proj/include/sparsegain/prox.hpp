#pragma once

#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"

namespace sparsegain {

/// The G-minimization sub-problem of one ADMM iteration:
///   minimize over G:  γ g(G) + (ρ/2) ‖G − V‖²_F,   V = (1/ρ)Λ + F.
/// The penalty is separable, so the minimizer is computed entrywise
/// (or blockwise) in closed form.
struct ProxProblem {
  GainMatrix v;
  double gamma = 0.0;
  double rho = 1.0;
  PenaltySpec spec;
};

/// Soft thresholding with per-entry threshold a = (γ/ρ) W_ij.
GainMatrix prox_weighted_l1(const ProxProblem& p);

/// Truncation with threshold b = sqrt(2γ/ρ); ties (|V| = b) map to zero.
GainMatrix prox_cardinality(const ProxProblem& p);

/// Closed-form minimizer for the sum-of-logs penalty. The surviving interior
/// candidate is r⁺ V; it is kept only when it beats the value at zero.
GainMatrix prox_sum_of_logs(const ProxProblem& p);

/// Block variant of the above: each block is scaled by the shrinkage factor
/// obtained by running the scalar rule on its Frobenius norm.
GainMatrix prox_blockwise(const ProxProblem& p);

/// Dispatch on penalty kind and granularity.
GainMatrix prox_solve(const ProxProblem& p);

}  // namespace sparsegain
