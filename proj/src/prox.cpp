#include "sparsegain/prox.hpp"

#include <cmath>

#include "sparsegain/errors.hpp"

namespace sparsegain {

namespace {

void check_problem(const ProxProblem& p, PenaltyKind kind, bool blockwise, const char* who) {
  if (p.rho <= 0.0) throw DefinitenessError(std::string(who) + ": rho must be positive");
  if (p.gamma < 0.0) throw DefinitenessError(std::string(who) + ": gamma must be nonnegative");
  if (p.spec.kind != kind) throw Error(std::string(who) + ": penalty kind mismatch");
  if (p.spec.blockwise() != blockwise)
    throw Error(std::string(who) + ": penalty granularity mismatch");
}

double weight_at(const PenaltySpec& spec, int i, int j) {
  if (spec.weights.empty()) return 1.0;
  if (spec.weights(i, j) < 0.0) throw DefinitenessError("prox: weights must be nonnegative");
  return spec.weights(i, j);
}

// Shrinkage of the scalar magnitude for the weighted l1 penalty: returns the
// multiplier in [0, 1] applied to the input value.
double l1_factor(double magnitude, double a) {
  if (magnitude <= a) return 0.0;
  return 1.0 - a / magnitude;
}

// Minimizer of γw log(1 + t/ε) + (ρ/2)(t − v)² over t >= 0, for v >= 0,
// returned as a multiplier of v. Stationary points solve a quadratic whose
// admissible root is r⁺ v; it wins only when it beats the value at zero.
double slog_factor(double v, double gamma_w, double rho, double eps) {
  if (v <= 0.0) return 0.0;
  if (gamma_w == 0.0) return 1.0;
  const double a = gamma_w / rho;
  const double delta = (v + eps) * (v + eps) - 4.0 * a;
  if (delta <= 0.0) return 0.0;
  const double rplus = (v - eps + std::sqrt(delta)) / (2.0 * v);
  if (rplus <= 0.0) return 0.0;
  const double g = rplus * v;
  const double phi_g = gamma_w * std::log(1.0 + g / eps) + 0.5 * rho * (g - v) * (g - v);
  const double phi_0 = 0.5 * rho * v * v;
  return (phi_g < phi_0) ? rplus : 0.0;
}

}  // namespace

GainMatrix prox_weighted_l1(const ProxProblem& p) {
  check_problem(p, PenaltyKind::WeightedL1, /*blockwise=*/false, "prox_weighted_l1");
  GainMatrix g(p.v.rows(), p.v.cols());
  for (int i = 0; i < p.v.rows(); ++i)
    for (int j = 0; j < p.v.cols(); ++j) {
      const double a = (p.gamma / p.rho) * weight_at(p.spec, i, j);
      g(i, j) = l1_factor(std::abs(p.v(i, j)), a) * p.v(i, j);
    }
  return g;
}

GainMatrix prox_cardinality(const ProxProblem& p) {
  check_problem(p, PenaltyKind::Cardinality, /*blockwise=*/false, "prox_cardinality");
  const double b = std::sqrt(2.0 * p.gamma / p.rho);
  GainMatrix g(p.v.rows(), p.v.cols());
  for (int i = 0; i < p.v.rows(); ++i)
    for (int j = 0; j < p.v.cols(); ++j) g(i, j) = (std::abs(p.v(i, j)) > b) ? p.v(i, j) : 0.0;
  return g;
}

GainMatrix prox_sum_of_logs(const ProxProblem& p) {
  check_problem(p, PenaltyKind::SumOfLogs, /*blockwise=*/false, "prox_sum_of_logs");
  if (p.spec.epsilon_log <= 0.0)
    throw DefinitenessError("prox_sum_of_logs: epsilon_log must be positive");
  GainMatrix g(p.v.rows(), p.v.cols());
  for (int i = 0; i < p.v.rows(); ++i)
    for (int j = 0; j < p.v.cols(); ++j) {
      const double w = weight_at(p.spec, i, j);
      g(i, j) =
          slog_factor(std::abs(p.v(i, j)), p.gamma * w, p.rho, p.spec.epsilon_log) * p.v(i, j);
    }
  return g;
}

GainMatrix prox_blockwise(const ProxProblem& p) {
  if (p.rho <= 0.0) throw DefinitenessError("prox_blockwise: rho must be positive");
  if (p.gamma < 0.0) throw DefinitenessError("prox_blockwise: gamma must be nonnegative");
  if (!p.spec.blockwise()) throw Error("prox_blockwise: spec carries no block partition");
  const BlockPartition& part = *p.spec.blocks;
  part.validate(p.v.rows(), p.v.cols());
  if (!p.spec.weights.empty() &&
      (p.spec.weights.rows() != part.num_block_rows() ||
       p.spec.weights.cols() != part.num_block_cols()))
    throw DimensionError("prox_blockwise: weight matrix must have one entry per block");

  GainMatrix g(p.v.rows(), p.v.cols());
  int i0 = 0;
  for (int bi = 0; bi < part.num_block_rows(); ++bi) {
    int j0 = 0;
    const int nr = part.row_sizes[bi];
    for (int bj = 0; bj < part.num_block_cols(); ++bj) {
      const int nc = part.col_sizes[bj];
      double ssq = 0.0;
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) ssq += p.v(i0 + i, j0 + j) * p.v(i0 + i, j0 + j);
      const double norm = std::sqrt(ssq);
      double factor = 0.0;
      switch (p.spec.kind) {
        case PenaltyKind::WeightedL1:
          factor = l1_factor(norm, (p.gamma / p.rho) * weight_at(p.spec, bi, bj));
          break;
        case PenaltyKind::Cardinality:
          factor = (norm > std::sqrt(2.0 * p.gamma / p.rho)) ? 1.0 : 0.0;
          break;
        case PenaltyKind::SumOfLogs:
          factor = slog_factor(norm, p.gamma * weight_at(p.spec, bi, bj), p.rho,
                               p.spec.epsilon_log);
          break;
      }
      if (factor != 0.0)
        for (int i = 0; i < nr; ++i)
          for (int j = 0; j < nc; ++j) g(i0 + i, j0 + j) = factor * p.v(i0 + i, j0 + j);
      j0 += nc;
    }
    i0 += nr;
  }
  return g;
}

GainMatrix prox_solve(const ProxProblem& p) {
  if (p.spec.blockwise()) return prox_blockwise(p);
  switch (p.spec.kind) {
    case PenaltyKind::WeightedL1:
      return prox_weighted_l1(p);
    case PenaltyKind::Cardinality:
      return prox_cardinality(p);
    case PenaltyKind::SumOfLogs:
      return prox_sum_of_logs(p);
  }
  throw Error("prox_solve: unknown penalty kind");
}

}  // namespace sparsegain
