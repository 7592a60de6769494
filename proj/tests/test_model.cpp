#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsegain/errors.hpp"
#include "sparsegain/model.hpp"
#include "sparsegain/problems.hpp"

using namespace sparsegain;

namespace {

BlockPartition unit_partition(int rows, int cols) {
  BlockPartition part;
  part.row_sizes.assign(rows, 1);
  part.col_sizes.assign(cols, 1);
  return part;
}

}  // namespace

TEST_CASE("plant validation") {
  Plant plant = mass_spring(3);
  CHECK_NOTHROW(validate(plant));
  Plant bad_q = plant;
  bad_q.q(0, 0) = -1.0;
  CHECK_THROWS_AS(validate(bad_q), DefinitenessError);
  Plant bad_r = plant;
  bad_r.r = Matrix(3, 3);
  CHECK_THROWS_AS(validate(bad_r), DefinitenessError);
  Plant bad_dim = plant;
  bad_dim.b2 = Matrix(5, 3);
  CHECK_THROWS_AS(validate(bad_dim), DimensionError);
}

TEST_CASE("penalty values: stated cases") {
  const Matrix zero(2, 3);
  for (PenaltyKind kind :
       {PenaltyKind::WeightedL1, PenaltyKind::Cardinality, PenaltyKind::SumOfLogs})
    CHECK(penalty_value(zero, PenaltySpec::elementwise(kind)) == 0.0);

  PenaltySpec wl1 = PenaltySpec::elementwise(PenaltyKind::WeightedL1);
  wl1.weights = Matrix(1, 2, {1.0, 1.0});
  CHECK(penalty_value(Matrix(1, 2, {1.0, -2.0}), wl1) == doctest::Approx(3.0));

  // single 1x2 block with Frobenius norm 5: blockwise cardinality counts one block
  BlockPartition whole;
  whole.row_sizes = {1};
  whole.col_sizes = {2};
  const PenaltySpec blk_card = PenaltySpec::blockwise(PenaltyKind::Cardinality, whole);
  CHECK(penalty_value(Matrix(1, 2, {3.0, 4.0}), blk_card) == doctest::Approx(1.0));
}

TEST_CASE("penalty positivity and zero-only-at-zero") {
  oracles::Rng rng(31);
  const Matrix f = rng.matrix(3, 4);
  for (PenaltyKind kind :
       {PenaltyKind::WeightedL1, PenaltyKind::Cardinality, PenaltyKind::SumOfLogs}) {
    const double v = penalty_value(f, PenaltySpec::elementwise(kind));
    CHECK(v > 0.0);
  }
}

TEST_CASE("elementwise penalty equals blockwise with 1x1 blocks") {
  oracles::Rng rng(32);
  const Matrix f = rng.matrix(3, 5);
  for (PenaltyKind kind :
       {PenaltyKind::WeightedL1, PenaltyKind::Cardinality, PenaltyKind::SumOfLogs}) {
    PenaltySpec elem = PenaltySpec::elementwise(kind);
    elem.weights = rng.matrix(3, 5, 0.5);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 5; ++j) elem.weights(i, j) = std::abs(elem.weights(i, j));
    PenaltySpec blk = PenaltySpec::blockwise(kind, unit_partition(3, 5));
    blk.weights = elem.weights;
    CHECK(penalty_value(f, elem) == penalty_value(f, blk));
  }
}

TEST_CASE("weighted l1 with magnitude-inverse weights equals cardinality") {
  oracles::Rng rng(33);
  Matrix f = rng.matrix(4, 4);
  f(0, 0) = 0.0;
  f(2, 3) = 0.0;
  PenaltySpec wl1 = PenaltySpec::elementwise(PenaltyKind::WeightedL1);
  wl1.weights = Matrix(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      wl1.weights(i, j) = (f(i, j) != 0.0) ? 1.0 / std::abs(f(i, j)) : 1e6;
  const double card = penalty_value(f, PenaltySpec::elementwise(PenaltyKind::Cardinality));
  CHECK(penalty_value(f, wl1) == doctest::Approx(card).epsilon(1e-12));
}

TEST_CASE("cardinality report: thresholds and masks") {
  const CardinalityReport zero = cardinality_report(Matrix(2, 2));
  CHECK(zero.nnz == 0);
  CHECK(zero.nnz_blocks == 0);
  CHECK(zero.mask.count() == 0);

  // entries below the numeric zero threshold are dropped
  const Matrix f(1, 2, {1e-12, 2.0});
  const CardinalityReport rep = cardinality_report(f);
  CHECK(rep.nnz == 1);
  CHECK(rep.mask.mask(0, 0) == 0.0);
  CHECK(rep.mask.mask(0, 1) == 1.0);

  // mask applied back reproduces F when entries are cleanly zero or large
  const Matrix f2(2, 2, {0.0, 3.0, -4.0, 0.0});
  const CardinalityReport rep2 = cardinality_report(f2);
  Matrix masked(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) masked(i, j) = f2(i, j) * rep2.mask.mask(i, j);
  CHECK((masked - f2).max_abs() == 0.0);
}

TEST_CASE("blockwise cardinality report counts blocks") {
  BlockPartition part;
  part.row_sizes = {1, 1};
  part.col_sizes = {2, 1};
  const Matrix f(2, 3, {1.0, 2.0, 0.0, 0.0, 0.0, 0.0});
  const CardinalityReport rep = cardinality_report(f, part);
  CHECK(rep.nnz == 2);
  CHECK(rep.nnz_blocks == 1);
}

TEST_CASE("structure mask admits") {
  StructureMask mask;
  mask.mask = Matrix(2, 2, {1, 0, 0, 1});
  CHECK(mask.count() == 2);
  CHECK(mask.admits(Matrix(2, 2, {5, 0, 0, -2})));
  CHECK_FALSE(mask.admits(Matrix(2, 2, {5, 1e-3, 0, -2})));
}

TEST_CASE("partition validation") {
  BlockPartition part;
  part.row_sizes = {1, 2};
  part.col_sizes = {3};
  CHECK_NOTHROW(part.validate(3, 3));
  CHECK_THROWS_AS(part.validate(4, 3), DimensionError);
  part.row_sizes = {0, 3};
  CHECK_THROWS_AS(part.validate(3, 3), DimensionError);
}
