#include "sparsegain/admm.hpp"

#include <cmath>
#include <limits>

#include "sparsegain/errors.hpp"
#include "sparsegain/prox.hpp"

namespace sparsegain {

namespace {

constexpr double kMinStep = 1e-12;

double augmented_value(const H2Eval& ev, const GainMatrix& f, const GainMatrix& u, double rho) {
  if (!ev.stable()) return std::numeric_limits<double>::infinity();
  const double dist = (f - u).frobenius_norm();
  return ev.j + 0.5 * rho * dist * dist;
}

}  // namespace

AmResult f_min_anderson_moore(const Plant& plant, const GainMatrix& u_target, double rho,
                              const GainMatrix& f0, const AdmmOptions& opts) {
  if (rho <= 0.0) throw DefinitenessError("anderson-moore: rho must be positive");
  AmResult out;
  out.eval = evaluate(plant, f0);
  if (!out.eval.stable())
    throw StabilityError("anderson-moore: initial gain is not stabilizing");
  ensure_gradient(plant, out.eval);
  out.f = f0;
  double phi = augmented_value(out.eval, out.f, u_target, rho);

  const SymmetricEig r_eig = sym_eig(plant.r);

  for (out.iters = 0; out.iters < opts.am_max_iter; ++out.iters) {
    const Matrix grad_phi = out.eval.grad + rho * (out.f - u_target);
    out.grad_norm = grad_phi.frobenius_norm();
    if (out.grad_norm <= opts.am_grad_tol * std::max(1.0, out.f.frobenius_norm())) {
      out.converged = true;
      return out;
    }

    // Stationarity in the gain with Gramians frozen:
    //   2 R F̄ L + ρ F̄ = 2 B2ᵀ P L + ρ U.
    const Matrix rhs =
        2.0 * (matmul_tn(plant.b2, out.eval.p) * out.eval.l) + rho * u_target;
    const SymmetricEig l_eig = sym_eig(out.eval.l);
    const Matrix fbar = solve_spd_sylvester(r_eig, l_eig, rho, rhs);

    const Matrix df = fbar - out.f;
    const double slope = frobenius_dot(grad_phi, df);
    if (!(slope < 0.0)) {  // no usable descent direction left
      out.stalled = true;
      return out;
    }

    double step = 1.0;
    bool accepted = false;
    while (step >= kMinStep) {
      const GainMatrix ft = out.f + step * df;
      H2Eval trial = evaluate(plant, ft);
      const double phit = augmented_value(trial, ft, u_target, rho);
      if (phit <= phi + opts.armijo_c * step * slope) {
        out.f = ft;
        out.eval = std::move(trial);
        phi = phit;
        accepted = true;
        break;
      }
      step *= opts.backtrack;
    }
    if (!accepted) {
      out.stalled = true;
      return out;
    }
    ensure_gradient(plant, out.eval);
  }
  // Iteration cap reached; report the final gradient norm.
  const Matrix grad_phi = out.eval.grad + rho * (out.f - u_target);
  out.grad_norm = grad_phi.frobenius_norm();
  return out;
}

AdmmState admm_solve(const Plant& plant, double gamma, const PenaltySpec& spec,
                     const GainMatrix& f_init, const AdmmOptions& opts) {
  if (gamma < 0.0) throw DefinitenessError("admm_solve: gamma must be nonnegative");
  if (opts.rho <= 0.0 || opts.eps_stop <= 0.0)
    throw DefinitenessError("admm_solve: rho and eps_stop must be positive");

  AdmmState st;
  st.f = f_init;
  st.g = f_init;
  st.lambda = Matrix(f_init.rows(), f_init.cols());
  st.primal_residual = std::numeric_limits<double>::infinity();
  st.g_change = std::numeric_limits<double>::infinity();

  const double inv_rho = 1.0 / opts.rho;
  for (st.iters = 1; st.iters <= opts.max_iter; ++st.iters) {
    const GainMatrix u = st.g - inv_rho * st.lambda;
    AmResult am = f_min_anderson_moore(plant, u, opts.rho, st.f, opts);
    if (am.stalled) ++st.f_step_stalls;
    st.f = am.f;

    ProxProblem gp;
    gp.v = st.f + inv_rho * st.lambda;
    gp.gamma = gamma;
    gp.rho = opts.rho;
    gp.spec = spec;
    const GainMatrix g_new = prox_solve(gp);

    st.primal_residual = (st.f - g_new).frobenius_norm();
    st.g_change = (g_new - st.g).frobenius_norm();
    st.lambda += opts.rho * (st.f - g_new);
    st.g = g_new;

    if (st.primal_residual <= opts.eps_stop && st.g_change <= opts.eps_stop) {
      st.status = SolveStatus::Converged;
      return st;
    }
  }
  st.iters = opts.max_iter;
  st.status = SolveStatus::IterLimit;
  return st;
}

CertificateReport critical_point_certificate(const Plant& plant, const AdmmState& state,
                                             double gamma, const PenaltySpec& spec) {
  CertificateReport rep;
  rep.primal = (state.f - state.g).frobenius_norm();
  rep.stationarity = (gradient(plant, state.f) + state.lambda).frobenius_norm();

  if (spec.kind != PenaltyKind::WeightedL1) {
    rep.subdiff = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }

  const double zero_tol = cardinality_zero_tol(state.g);
  auto weight = [&](int i, int j) {
    return spec.weights.empty() ? 1.0 : spec.weights(i, j);
  };

  double viol = 0.0;
  if (!spec.blockwise()) {
    for (int i = 0; i < state.g.rows(); ++i)
      for (int j = 0; j < state.g.cols(); ++j) {
        const double gij = state.g(i, j);
        const double lij = state.lambda(i, j);
        const double gw = gamma * weight(i, j);
        if (std::abs(gij) <= zero_tol)
          viol = std::max(viol, std::abs(lij) - gw);
        else
          viol = std::max(viol, std::abs(lij - gw * ((gij > 0.0) ? 1.0 : -1.0)));
      }
  } else {
    const BlockPartition& part = *spec.blocks;
    part.validate(state.g.rows(), state.g.cols());
    int i0 = 0;
    for (int bi = 0; bi < part.num_block_rows(); ++bi) {
      int j0 = 0;
      for (int bj = 0; bj < part.num_block_cols(); ++bj) {
        const Matrix gb = state.g.block(i0, j0, part.row_sizes[bi], part.col_sizes[bj]);
        const Matrix lb = state.lambda.block(i0, j0, part.row_sizes[bi], part.col_sizes[bj]);
        const double gnorm = gb.frobenius_norm();
        const double gw = gamma * weight(bi, bj);
        if (gnorm <= zero_tol)
          viol = std::max(viol, lb.frobenius_norm() - gw);
        else
          viol = std::max(viol, (lb - (gw / gnorm) * gb).frobenius_norm());
        j0 += part.col_sizes[bj];
      }
      i0 += part.row_sizes[bi];
    }
  }
  rep.subdiff = std::max(0.0, viol);
  return rep;
}

}  // namespace sparsegain
