#include "sparsegain/h2.hpp"

#include <limits>

#include "sparsegain/errors.hpp"

namespace sparsegain {

namespace {

void check_gain_dims(const Plant& plant, const GainMatrix& f, const char* who) {
  if (f.rows() != plant.num_inputs() || f.cols() != plant.num_states())
    throw DimensionError(std::string(who) + ": gain must be " +
                         std::to_string(plant.num_inputs()) + "x" +
                         std::to_string(plant.num_states()));
}

}  // namespace

H2Eval evaluate(const Plant& plant, const GainMatrix& f) {
  check_gain_dims(plant, f, "evaluate");
  if (!f.all_finite()) throw NumericalError("evaluate: gain has non-finite entries");
  H2Eval ev;
  ev.f = f;
  ev.acl = plant.a - plant.b2 * f;
  ev.schur = real_schur(ev.acl);
  ev.alpha = spectral_abscissa(ev.schur);
  if (!ev.stable()) {
    ev.j = std::numeric_limits<double>::infinity();
    return ev;
  }
  const Matrix rhs = symmetrized(plant.q + matmul_tn(f, plant.r * f));
  ev.p = solve_lyapunov(ev.schur, rhs);
  ev.j = frobenius_dot(ev.p, matmul_nt(plant.b1, plant.b1));
  return ev;
}

void ensure_gradient(const Plant& plant, H2Eval& eval) {
  if (!eval.stable()) throw StabilityError("gradient: gain is not stabilizing");
  if (eval.has_gradient()) return;
  eval.l = solve_dual_lyapunov(eval.schur, matmul_nt(plant.b1, plant.b1));
  eval.grad = 2.0 * ((plant.r * eval.f - matmul_tn(plant.b2, eval.p)) * eval.l);
}

double objective(const Plant& plant, const GainMatrix& f) { return evaluate(plant, f).j; }

GainMatrix gradient(const Plant& plant, const GainMatrix& f) {
  H2Eval ev = evaluate(plant, f);
  ensure_gradient(plant, ev);
  return ev.grad;
}

GainMatrix hessian_apply(const Plant& plant, H2Eval& eval, const GainMatrix& dir) {
  check_gain_dims(plant, dir, "hessian_apply");
  ensure_gradient(plant, eval);

  // Acl L̃ + L̃ Aclᵀ = B2 F̃ L + (B2 F̃ L)ᵀ
  const Matrix bfl = plant.b2 * (dir * eval.l);
  const Matrix ltil = solve_dual_lyapunov(eval.schur, -1.0 * (bfl + bfl.transpose()));

  // Aclᵀ P̃ + P̃ Acl = (P B2 − FᵀR) F̃ + F̃ᵀ (B2ᵀP − RF)
  const Matrix pbfr = (eval.p * plant.b2 - matmul_tn(eval.f, plant.r)) * dir;
  const Matrix ptil = solve_lyapunov(eval.schur, -1.0 * (pbfr + pbfr.transpose()));

  return 2.0 * ((plant.r * dir - matmul_tn(plant.b2, ptil)) * eval.l +
                (plant.r * eval.f - matmul_tn(plant.b2, eval.p)) * ltil);
}

GainMatrix hessian_apply(const Plant& plant, const GainMatrix& f, const GainMatrix& dir) {
  H2Eval ev = evaluate(plant, f);
  if (!ev.stable()) throw StabilityError("hessian_apply: gain is not stabilizing");
  return hessian_apply(plant, ev, dir);
}

}  // namespace sparsegain
