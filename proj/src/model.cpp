#include "sparsegain/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "sparsegain/errors.hpp"
#include "sparsegain/linalg.hpp"

namespace sparsegain {

void validate(const Plant& plant) {
  const int n = plant.a.rows();
  const int m = plant.b2.cols();
  if (plant.a.cols() != n) throw DimensionError("plant: A must be square");
  if (plant.b1.rows() != n) throw DimensionError("plant: B1 must have n rows");
  if (plant.b2.rows() != n) throw DimensionError("plant: B2 must have n rows");
  if (plant.q.rows() != n || plant.q.cols() != n) throw DimensionError("plant: Q must be n x n");
  if (plant.r.rows() != m || plant.r.cols() != m) throw DimensionError("plant: R must be m x m");
  for (const Matrix* mat : {&plant.a, &plant.b1, &plant.b2, &plant.q, &plant.r})
    if (!mat->all_finite()) throw NumericalError("plant: non-finite entry");

  const double tol = 1e-10;
  const double q_scale = std::max(1.0, plant.q.frobenius_norm());
  const double r_scale = std::max(1.0, plant.r.frobenius_norm());
  if ((plant.q - plant.q.transpose()).max_abs() > tol * q_scale)
    throw DefinitenessError("plant: Q is not symmetric");
  if ((plant.r - plant.r.transpose()).max_abs() > tol * r_scale)
    throw DefinitenessError("plant: R is not symmetric");

  const SymmetricEig eq = sym_eig(symmetrized(plant.q));
  if (eq.values.front() < -tol * q_scale)
    throw DefinitenessError("plant: Q is not positive semidefinite");
  const SymmetricEig er = sym_eig(symmetrized(plant.r));
  if (er.values.front() <= tol * r_scale)
    throw DefinitenessError("plant: R is not positive definite");
}

int BlockPartition::total_rows() const {
  return std::accumulate(row_sizes.begin(), row_sizes.end(), 0);
}

int BlockPartition::total_cols() const {
  return std::accumulate(col_sizes.begin(), col_sizes.end(), 0);
}

int BlockPartition::row_offset(int bi) const {
  return std::accumulate(row_sizes.begin(), row_sizes.begin() + bi, 0);
}

int BlockPartition::col_offset(int bj) const {
  return std::accumulate(col_sizes.begin(), col_sizes.begin() + bj, 0);
}

void BlockPartition::validate(int rows, int cols) const {
  for (int s : row_sizes)
    if (s <= 0) throw DimensionError("partition: block row sizes must be positive");
  for (int s : col_sizes)
    if (s <= 0) throw DimensionError("partition: block column sizes must be positive");
  if (total_rows() != rows || total_cols() != cols)
    throw DimensionError("partition: block sizes sum to " + std::to_string(total_rows()) + "x" +
                         std::to_string(total_cols()) + ", gain is " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

PenaltySpec PenaltySpec::elementwise(PenaltyKind kind) {
  PenaltySpec spec;
  spec.kind = kind;
  return spec;
}

PenaltySpec PenaltySpec::blockwise(PenaltyKind kind, BlockPartition partition) {
  PenaltySpec spec;
  spec.kind = kind;
  spec.blocks = std::move(partition);
  return spec;
}

int StructureMask::count() const {
  int c = 0;
  for (int i = 0; i < mask.rows(); ++i)
    for (int j = 0; j < mask.cols(); ++j)
      if (mask(i, j) != 0.0) ++c;
  return c;
}

bool StructureMask::admits(const Matrix& f, double tol) const {
  if (!f.same_size(mask)) return false;
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      if (mask(i, j) == 0.0 && std::abs(f(i, j)) > tol) return false;
  return true;
}

namespace {

// Weight lookup defaulting to 1 when the spec carries no weight matrix.
double weight_at(const PenaltySpec& spec, int i, int j) {
  if (spec.weights.empty()) return 1.0;
  return spec.weights(i, j);
}

void check_weights(const PenaltySpec& spec, int wrows, int wcols, const char* who) {
  if (spec.weights.empty()) return;
  if (spec.weights.rows() != wrows || spec.weights.cols() != wcols)
    throw DimensionError(std::string(who) + ": weight matrix must be " + std::to_string(wrows) +
                         "x" + std::to_string(wcols));
  for (int i = 0; i < wrows; ++i)
    for (int j = 0; j < wcols; ++j)
      if (spec.weights(i, j) < 0.0)
        throw DefinitenessError(std::string(who) + ": weights must be nonnegative");
}

double scalar_penalty(PenaltyKind kind, double magnitude, double w, double eps_log) {
  switch (kind) {
    case PenaltyKind::WeightedL1:
      return w * magnitude;
    case PenaltyKind::Cardinality:
      return magnitude != 0.0 ? 1.0 : 0.0;
    case PenaltyKind::SumOfLogs:
      return w * std::log(1.0 + magnitude / eps_log);
  }
  return 0.0;
}

double block_frobenius(const Matrix& f, int i0, int j0, int nr, int nc) {
  double s = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) {
      double v = f(i0 + i, j0 + j);
      s += v * v;
    }
  return std::sqrt(s);
}

}  // namespace

double penalty_value(const GainMatrix& f, const PenaltySpec& spec) {
  if (spec.epsilon_log <= 0.0) throw DefinitenessError("penalty: epsilon_log must be positive");
  double total = 0.0;
  if (!spec.blockwise()) {
    check_weights(spec, f.rows(), f.cols(), "penalty");
    for (int i = 0; i < f.rows(); ++i)
      for (int j = 0; j < f.cols(); ++j)
        total += scalar_penalty(spec.kind, std::abs(f(i, j)), weight_at(spec, i, j),
                                spec.epsilon_log);
    return total;
  }
  const BlockPartition& part = *spec.blocks;
  part.validate(f.rows(), f.cols());
  check_weights(spec, part.num_block_rows(), part.num_block_cols(), "penalty");
  int i0 = 0;
  for (int bi = 0; bi < part.num_block_rows(); ++bi) {
    int j0 = 0;
    for (int bj = 0; bj < part.num_block_cols(); ++bj) {
      const double norm = block_frobenius(f, i0, j0, part.row_sizes[bi], part.col_sizes[bj]);
      total += scalar_penalty(spec.kind, norm, weight_at(spec, bi, bj), spec.epsilon_log);
      j0 += part.col_sizes[bj];
    }
    i0 += part.row_sizes[bi];
  }
  return total;
}

double cardinality_zero_tol(const GainMatrix& f) { return 1e-8 * std::max(1.0, f.max_abs()); }

CardinalityReport cardinality_report(const GainMatrix& f,
                                     const std::optional<BlockPartition>& blocks) {
  CardinalityReport report;
  report.zero_tol = cardinality_zero_tol(f);
  report.mask.mask = Matrix(f.rows(), f.cols());
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      if (std::abs(f(i, j)) > report.zero_tol) {
        report.mask.mask(i, j) = 1.0;
        ++report.nnz;
      }
  if (!blocks) {
    report.nnz_blocks = report.nnz;
    return report;
  }
  const BlockPartition& part = *blocks;
  part.validate(f.rows(), f.cols());
  int i0 = 0;
  for (int bi = 0; bi < part.num_block_rows(); ++bi) {
    int j0 = 0;
    for (int bj = 0; bj < part.num_block_cols(); ++bj) {
      if (block_frobenius(f, i0, j0, part.row_sizes[bi], part.col_sizes[bj]) > report.zero_tol)
        ++report.nnz_blocks;
      j0 += part.col_sizes[bj];
    }
    i0 += part.row_sizes[bi];
  }
  return report;
}

}  // namespace sparsegain
