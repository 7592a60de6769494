#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sparsegain/errors.hpp"
#include "sparsegain/matrix.hpp"

using namespace sparsegain;

TEST_CASE("construction and access") {
  Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 2) == 6.0);
  CHECK(Matrix::identity(3)(2, 2) == 1.0);
  CHECK(Matrix::identity(3)(0, 2) == 0.0);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0}), DimensionError);
}

TEST_CASE("arithmetic and norms") {
  Matrix a(2, 2, {1, 2, 3, 4});
  Matrix b(2, 2, {5, 6, 7, 8});
  CHECK((a + b)(0, 1) == 8.0);
  CHECK((a - b)(1, 0) == -4.0);
  CHECK((2.0 * a)(1, 1) == 8.0);
  CHECK(a.trace() == 5.0);
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(30.0)));
  CHECK(a.max_abs() == 4.0);
  CHECK_THROWS_AS(a + Matrix(3, 3), DimensionError);
}

TEST_CASE("matmul against explicit loops") {
  oracles::Rng rng(11);
  const Matrix a = rng.matrix(4, 3);
  const Matrix b = rng.matrix(3, 5);
  const Matrix c = a * b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 5; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("transpose-aware products match explicit transposes") {
  oracles::Rng rng(12);
  const Matrix a = rng.matrix(4, 3);
  const Matrix b = rng.matrix(4, 5);
  const Matrix c = rng.matrix(6, 3);
  CHECK((matmul_tn(a, b) - a.transpose() * b).max_abs() < 1e-13);
  CHECK((matmul_nt(a, c) - a * c.transpose()).max_abs() < 1e-13);
  CHECK(frobenius_dot(a, a) == doctest::Approx(a.frobenius_norm() * a.frobenius_norm()));
}

TEST_CASE("blocks and symmetrization") {
  Matrix m(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const Matrix b = m.block(1, 0, 2, 2);
  CHECK(b(0, 0) == 4.0);
  CHECK(b(1, 1) == 8.0);
  Matrix z(3, 3);
  z.set_block(1, 1, Matrix(2, 2, {1, 1, 1, 1}));
  CHECK(z(1, 1) == 1.0);
  CHECK(z(0, 0) == 0.0);
  const Matrix s = symmetrized(m);
  CHECK(s(0, 1) == doctest::Approx(3.0));
  CHECK(s(1, 0) == doctest::Approx(3.0));
}
