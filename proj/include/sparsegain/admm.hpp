#pragma once

#include "sparsegain/h2.hpp"
#include "sparsegain/matrix.hpp"
#include "sparsegain/model.hpp"

namespace sparsegain {

struct AdmmOptions {
  double rho = 100.0;       // augmented Lagrangian weight
  double eps_stop = 1e-4;   // stopping tolerance on ‖F−G‖_F and ‖G⁺−G‖_F
  int max_iter = 1000;      // ADMM iteration cap
  int am_max_iter = 50;     // Anderson–Moore iteration cap per F-step
  double am_grad_tol = 1e-3;  // F-step gradient tolerance, scaled by max(1, ‖F‖_F)
  double armijo_c = 1e-4;
  double backtrack = 0.5;
};

enum class SolveStatus {
  Converged,
  IterLimit,
};

/// Result of one Anderson–Moore descent run on
///   φ(F) = J(F) + (ρ/2) ‖F − U‖²_F.
struct AmResult {
  GainMatrix f;
  H2Eval eval;       // evaluation at the returned gain (gradient filled in)
  int iters = 0;
  double grad_norm = 0.0;
  bool converged = false;
  bool stalled = false;  // line search ran out of step sizes
};

/// Minimize φ over stabilizing gains, alternating Gramian solves with the
/// Sylvester solve of the gain stationarity condition, safeguarded by a
/// backtracking line search that treats unstable candidates as φ = +inf.
AmResult f_min_anderson_moore(const Plant& plant, const GainMatrix& u_target, double rho,
                              const GainMatrix& f0, const AdmmOptions& opts);

struct AdmmState {
  GainMatrix f;
  GainMatrix g;
  GainMatrix lambda;
  int iters = 0;
  double primal_residual = 0.0;  // ‖F − G‖_F at termination
  double g_change = 0.0;         // ‖G⁺ − G‖_F at termination
  SolveStatus status = SolveStatus::IterLimit;
  int f_step_stalls = 0;  // F-steps whose line search stalled
};

/// ADMM on the split problem: F-step (Anderson–Moore), analytical G-step
/// (prox), dual ascent with step ρ. Every F iterate is stabilizing.
AdmmState admm_solve(const Plant& plant, double gamma, const PenaltySpec& spec,
                     const GainMatrix& f_init, const AdmmOptions& opts);

/// Residuals of the critical-point conditions at an ADMM state:
///   F − G = 0,  ∇J(F) + Λ = 0,  Λ ∈ γ ∂g(G).
/// The subdifferential residual is reported for the weighted l1 penalty
/// (elementwise or blockwise); NaN for other penalties.
struct CertificateReport {
  double primal = 0.0;
  double stationarity = 0.0;
  double subdiff = 0.0;
};

CertificateReport critical_point_certificate(const Plant& plant, const AdmmState& state,
                                             double gamma, const PenaltySpec& spec);

}  // namespace sparsegain
