#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "sparsegain/errors.hpp"
#include "sparsegain/h2.hpp"
#include "sparsegain/linalg.hpp"
#include "sparsegain/problems.hpp"

using namespace sparsegain;

namespace {

Plant scalar_plant() {
  Plant p;
  p.a = Matrix(1, 1, {1.0});
  p.b1 = Matrix(1, 1, {1.0});
  p.b2 = Matrix(1, 1, {1.0});
  p.q = Matrix(1, 1, {1.0});
  p.r = Matrix(1, 1, {1.0});
  return p;
}

// Random plant with a known stabilizing gain to start from.
struct Instance {
  Plant plant;
  GainMatrix f;
};

Instance random_instance(oracles::Rng& rng, int n, int m, int d) {
  Instance inst;
  inst.plant.a = rng.matrix(n, n);
  inst.plant.b1 = rng.matrix(n, d);
  inst.plant.b2 = rng.matrix(n, m);
  inst.plant.q = rng.spd(n, 0.3);
  inst.plant.r = rng.spd(m, 0.5);
  const AreSolution are = solve_are(inst.plant);
  // perturb the centralized gain but keep it stabilizing
  for (int trial = 0; trial < 50; ++trial) {
    GainMatrix f = are.gain + rng.matrix(m, n, 0.1);
    if (spectral_abscissa(inst.plant.a - inst.plant.b2 * f) < -1e-3) {
      inst.f = f;
      return inst;
    }
  }
  inst.f = are.gain;
  return inst;
}

// scalar closed form: J(F) = (1 + F^2) / (2(F - 1)) for F > 1
double scalar_j(double f) { return (1.0 + f * f) / (2.0 * (f - 1.0)); }

GainMatrix fd_gradient(const Plant& plant, const GainMatrix& f, double h) {
  GainMatrix g(f.rows(), f.cols());
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      GainMatrix fp = f, fm = f;
      fp(i, j) += h;
      fm(i, j) -= h;
      g(i, j) = (objective(plant, fp) - objective(plant, fm)) / (2.0 * h);
    }
  return g;
}

}  // namespace

TEST_CASE("objective: scalar closed forms and instability") {
  const Plant plant = scalar_plant();
  const double fc = 1.0 + std::sqrt(2.0);
  CHECK(objective(plant, Matrix(1, 1, {fc})) == doctest::Approx(fc).epsilon(1e-12));
  CHECK(objective(plant, Matrix(1, 1, {0.5})) == std::numeric_limits<double>::infinity());
  CHECK(objective(plant, Matrix(1, 1, {2.0})) == doctest::Approx(scalar_j(2.0)).epsilon(1e-12));
}

TEST_CASE("objective matches the controllability-Gramian trace identity") {
  oracles::Rng rng(41);
  const Instance inst = random_instance(rng, 5, 2, 3);
  const double j = objective(inst.plant, inst.f);
  // dual route: J = trace((Q + FᵀRF) L), L the controllability Gramian
  const Matrix acl = inst.plant.a - inst.plant.b2 * inst.f;
  const Matrix l = solve_dual_lyapunov(acl, matmul_nt(inst.plant.b1, inst.plant.b1));
  const Matrix w = inst.plant.q + matmul_tn(inst.f, inst.plant.r * inst.f);
  CHECK(j == doctest::Approx(frobenius_dot(w, l)).epsilon(1e-8));
}

TEST_CASE("objective is permutation invariant") {
  oracles::Rng rng(42);
  const Instance inst = random_instance(rng, 5, 2, 2);
  // permute states by a cyclic shift
  const int n = 5;
  Matrix perm(n, n);
  for (int i = 0; i < n; ++i) perm(i, (i + 2) % n) = 1.0;
  Plant permuted;
  permuted.a = perm * inst.plant.a * perm.transpose();
  permuted.b1 = perm * inst.plant.b1;
  permuted.b2 = perm * inst.plant.b2;
  permuted.q = perm * inst.plant.q * perm.transpose();
  permuted.r = inst.plant.r;
  const GainMatrix f_perm = inst.f * perm.transpose();
  CHECK(objective(permuted, f_perm) ==
        doctest::Approx(objective(inst.plant, inst.f)).epsilon(1e-10));
}

TEST_CASE("gradient vanishes at the centralized gain") {
  oracles::Rng rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    const Instance inst = random_instance(rng, 4, 2, 2);
    const AreSolution are = solve_are(inst.plant);
    const GainMatrix g = gradient(inst.plant, are.gain);
    CHECK(g.frobenius_norm() <= 1e-8 * std::max(1.0, are.gain.frobenius_norm()));
  }
}

TEST_CASE("gradient matches central finite differences") {
  oracles::Rng rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = random_instance(rng, 4 + trial % 3, 2, 2);
    const GainMatrix g = gradient(inst.plant, inst.f);
    const GainMatrix g_fd = fd_gradient(inst.plant, inst.f, 1e-5);
    CHECK((g - g_fd).frobenius_norm() <= 1e-5 * std::max(1.0, g.frobenius_norm()));
  }
}

TEST_CASE("gradient matches the scalar closed-form derivative") {
  const Plant plant = scalar_plant();
  const double f0 = 2.0;
  // d/dF [(1+F^2)/(2(F-1))] = (F^2 - 2F - 1) / (2 (F-1)^2)
  const double dj = (f0 * f0 - 2.0 * f0 - 1.0) / (2.0 * (f0 - 1.0) * (f0 - 1.0));
  CHECK(gradient(plant, Matrix(1, 1, {f0}))(0, 0) == doctest::Approx(dj).epsilon(1e-10));
}

TEST_CASE("gradient rejects destabilizing gains") {
  CHECK_THROWS_AS(gradient(scalar_plant(), Matrix(1, 1, {0.0})), StabilityError);
}

TEST_CASE("hessian action: zero direction, linearity, symmetry") {
  oracles::Rng rng(45);
  const Instance inst = random_instance(rng, 5, 2, 2);
  H2Eval ev = evaluate(inst.plant, inst.f);
  const GainMatrix zero(2, 5);
  CHECK(hessian_apply(inst.plant, ev, zero).max_abs() == 0.0);

  const GainMatrix e1 = rng.matrix(2, 5);
  const GainMatrix e2 = rng.matrix(2, 5);
  const GainMatrix h1 = hessian_apply(inst.plant, ev, e1);
  const GainMatrix h2m = hessian_apply(inst.plant, ev, e2);
  // additivity + homogeneity
  const GainMatrix hsum = hessian_apply(inst.plant, ev, e1 + 2.0 * e2);
  CHECK((hsum - h1 - 2.0 * h2m).frobenius_norm() <=
        1e-10 * std::max(1.0, hsum.frobenius_norm()));
  // symmetry of the bilinear form
  const double s12 = frobenius_dot(h1, e2);
  const double s21 = frobenius_dot(h2m, e1);
  CHECK(s12 == doctest::Approx(s21).epsilon(1e-8));
}

TEST_CASE("hessian action matches gradient differencing") {
  oracles::Rng rng(46);
  for (int trial = 0; trial < 3; ++trial) {
    const Instance inst = random_instance(rng, 4, 2, 2);
    const GainMatrix dir = rng.matrix(2, 4);
    const GainMatrix h = hessian_apply(inst.plant, inst.f, dir);
    const double step = 1e-5;
    const GainMatrix gp = gradient(inst.plant, inst.f + step * dir);
    const GainMatrix gm = gradient(inst.plant, inst.f - step * dir);
    const GainMatrix h_fd = (1.0 / (2.0 * step)) * (gp - gm);
    CHECK((h - h_fd).frobenius_norm() <= 1e-4 * std::max(1.0, h.frobenius_norm()));
  }
}

TEST_CASE("centralized gain is a lower bound for the objective") {
  oracles::Rng rng(47);
  const Instance inst = random_instance(rng, 5, 2, 2);
  const AreSolution are = solve_are(inst.plant);
  const double jc = objective(inst.plant, are.gain);
  for (int trial = 0; trial < 10; ++trial) {
    const GainMatrix f = are.gain + rng.matrix(2, 5, 0.2);
    const double j = objective(inst.plant, f);  // may be +inf
    CHECK(j >= jc - 1e-10 * std::max(1.0, jc));
  }
}
