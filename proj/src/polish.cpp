#include "sparsegain/polish.hpp"

#include <cmath>

#include "sparsegain/errors.hpp"
#include "sparsegain/h2.hpp"

namespace sparsegain {

namespace {

constexpr double kMinStep = 1e-12;

// Truncated CG on the masked Newton system  (H ∘ I_S) d = −∇J ∘ I_S.
// All iterates live on the mask support. Returns the best iterate when
// negative curvature shows up (the steepest-descent residual if that
// happens on the very first step).
GainMatrix newton_direction(const Plant& plant, H2Eval& eval, const StructureMask& mask,
                            const Matrix& masked_grad, const PolishOptions& opts, int free_count) {
  GainMatrix x(masked_grad.rows(), masked_grad.cols());
  Matrix r = -1.0 * masked_grad;
  Matrix p = r;
  double rr = frobenius_dot(r, r);
  const double b_norm = std::sqrt(rr);
  if (b_norm == 0.0) return x;
  const int cap = std::max(1, 2 * free_count);
  for (int it = 0; it < cap; ++it) {
    const Matrix hp = hadamard(hessian_apply(plant, eval, p), mask.mask);
    const double php = frobenius_dot(p, hp);
    // negative (or numerically vanishing) curvature: truncate
    if (php <= 1e-12 * frobenius_dot(p, p)) return (it == 0) ? r : x;
    const double alpha = rr / php;
    x += alpha * p;
    r -= alpha * hp;
    const double rr_new = frobenius_dot(r, r);
    if (std::sqrt(rr_new) <= opts.cg_rel_tol * b_norm) return x;
    p = r + (rr_new / rr) * p;
    rr = rr_new;
  }
  return x;
}

}  // namespace

GainMatrix project_structure(const GainMatrix& f, const StructureMask& mask) {
  if (!f.same_size(mask.mask)) throw DimensionError("project_structure: dimension mismatch");
  return hadamard(f, mask.mask);
}

PolishResult polish_gain(const Plant& plant, const StructureMask& mask, const GainMatrix& f0,
                         const PolishOptions& opts) {
  if (!f0.same_size(mask.mask)) throw DimensionError("polish_gain: dimension mismatch");
  if (!mask.admits(f0)) throw StructureError("polish_gain: initial gain violates the structure");

  H2Eval ev = evaluate(plant, f0);
  if (!ev.stable()) throw StabilityError("polish_gain: initial gain is not stabilizing");
  ensure_gradient(plant, ev);

  PolishResult out;
  out.f = f0;
  const int free_count = mask.count();

  for (out.newton_iters = 0; out.newton_iters < opts.max_newton; ++out.newton_iters) {
    const Matrix gs = hadamard(ev.grad, mask.mask);
    if (gs.frobenius_norm() <= opts.grad_tol * std::max(1.0, out.f.frobenius_norm())) {
      out.converged = true;
      break;
    }

    GainMatrix dir = newton_direction(plant, ev, mask, gs, opts, free_count);
    double slope = frobenius_dot(gs, dir);
    if (!(slope < 0.0)) {  // safeguard: fall back to steepest descent
      dir = -1.0 * gs;
      slope = -frobenius_dot(gs, gs);
      if (!(slope < 0.0)) break;
    }

    double step = 1.0;
    bool accepted = false;
    while (step >= kMinStep) {
      const GainMatrix ft = out.f + step * dir;
      H2Eval trial = evaluate(plant, ft);
      if (trial.j <= ev.j + opts.armijo_c * step * slope) {
        out.f = ft;
        ev = std::move(trial);
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) break;  // stalled; keep the best iterate found so far
    ensure_gradient(plant, ev);
  }

  out.j = ev.j;
  return out;
}

}  // namespace sparsegain
