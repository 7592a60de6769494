#pragma once

#include <optional>
#include <vector>

#include "sparsegain/matrix.hpp"

namespace sparsegain {

/// State feedback gains and the ADMM iterates G, Λ, V, U share this shape.
using GainMatrix = Matrix;

/// Synthesis problem data for
///   ẋ = A x + B1 d + B2 u,  u = −F x,
/// with state weight Q ⪰ 0 and control weight R ≻ 0.
struct Plant {
  Matrix a;   // n x n
  Matrix b1;  // n x d  (disturbance input)
  Matrix b2;  // n x m  (control input)
  Matrix q;   // n x n
  Matrix r;   // m x m

  int num_states() const { return a.rows(); }
  int num_inputs() const { return b2.cols(); }
  int num_disturbances() const { return b1.cols(); }
};

/// Dimension consistency, symmetry, Q ⪰ 0, R ≻ 0 (to 1e-10 relative), finiteness.
/// Throws DimensionError / DefinitenessError.
void validate(const Plant& plant);

/// Partition of an m x n gain into blocks F_ij of size row_sizes[i] x col_sizes[j].
struct BlockPartition {
  std::vector<int> row_sizes;
  std::vector<int> col_sizes;

  int num_block_rows() const { return static_cast<int>(row_sizes.size()); }
  int num_block_cols() const { return static_cast<int>(col_sizes.size()); }
  int total_rows() const;
  int total_cols() const;
  int row_offset(int bi) const;
  int col_offset(int bj) const;

  /// Throws DimensionError unless sizes are positive and sum to rows x cols.
  void validate(int rows, int cols) const;
};

enum class PenaltyKind {
  WeightedL1,   // Σ W_ij |F_ij|          (block form: Σ W_ij ‖F_ij‖_F)
  Cardinality,  // number of nonzeros     (block form: number of nonzero blocks)
  SumOfLogs,    // Σ log(1 + |F_ij|/ε)    (block form: Σ log(1 + ‖F_ij‖_F/ε))
};

/// Which penalty g is used and at what granularity. `weights` has gain
/// dimensions for elementwise penalties, and one entry per block when a
/// partition is present. Cardinality ignores weights.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::WeightedL1;
  std::optional<BlockPartition> blocks;  // empty: elementwise
  Matrix weights;                        // nonnegative; empty means all ones
  double epsilon_log = 1e-1;             // ε in the sum-of-logs penalty
  double epsilon_reweight = 1e-3;        // ε in the reweighting rule 1/(|F| + ε)

  bool blockwise() const { return blocks.has_value(); }

  static PenaltySpec elementwise(PenaltyKind kind);
  static PenaltySpec blockwise(PenaltyKind kind, BlockPartition partition);
};

/// Binary mask fixing the admissible sparsity pattern: 1 marks a free entry,
/// 0 an entry pinned to zero.
struct StructureMask {
  Matrix mask;  // entries in {0, 1}

  int count() const;  // number of free entries
  bool admits(const Matrix& f, double tol = 0.0) const;
};

/// Evaluate the sparsity-promoting penalty g(F) for the given spec.
double penalty_value(const GainMatrix& f, const PenaltySpec& spec);

struct CardinalityReport {
  int nnz = 0;         // entries with |F_ij| > zero_tol
  int nnz_blocks = 0;  // blocks with ‖F_ij‖_F > zero_tol (equals nnz when elementwise)
  StructureMask mask;  // marks the nonzero entries
  double zero_tol = 0.0;
};

/// Numeric zero threshold used when counting nonzeros: 1e-8 · max(1, ‖F‖_max).
double cardinality_zero_tol(const GainMatrix& f);

CardinalityReport cardinality_report(const GainMatrix& f,
                                     const std::optional<BlockPartition>& blocks = std::nullopt);

}  // namespace sparsegain
