#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsegain/errors.hpp"
#include "sparsegain/h2.hpp"
#include "sparsegain/linalg.hpp"
#include "sparsegain/polish.hpp"
#include "sparsegain/problems.hpp"

using namespace sparsegain;

namespace {

StructureMask ones_mask(int rows, int cols) {
  StructureMask mask;
  mask.mask = Matrix(rows, cols);
  mask.mask.fill(1.0);
  return mask;
}

}  // namespace

TEST_CASE("project_structure basics") {
  oracles::Rng rng(71);
  const Matrix f = rng.matrix(2, 3);
  const StructureMask all = ones_mask(2, 3);
  CHECK((project_structure(f, all) - f).max_abs() == 0.0);
  StructureMask none;
  none.mask = Matrix(2, 3);
  CHECK(project_structure(f, none).max_abs() == 0.0);
  StructureMask some;
  some.mask = Matrix(2, 3, {1, 0, 1, 0, 1, 0});
  const Matrix once = project_structure(f, some);
  CHECK((project_structure(once, some) - once).max_abs() == 0.0);  // idempotent
  CHECK_THROWS_AS(project_structure(f, ones_mask(3, 2)), DimensionError);
}

TEST_CASE("dense mask: Newton recovers the centralized gain") {
  oracles::Rng rng(72);
  for (int n : {3, 6, 10}) {
    // full-rank disturbance input keeps the controllability Gramian well
    // conditioned, so the minimizer comparison below is meaningful
    Plant plant;
    plant.a = rng.matrix(n, n);
    const int m = std::max(1, n / 2);
    plant.b2 = rng.matrix(n, m);
    plant.b1 = rng.matrix(n, n);
    plant.q = rng.spd(n, 0.3);
    plant.r = rng.spd(m, 0.5);
    const AreSolution are = solve_are(plant);
    // start from a perturbed stabilizing gain
    GainMatrix f0 = are.gain;
    for (int trial = 0; trial < 50; ++trial) {
      const GainMatrix cand = are.gain + rng.matrix(m, n, 0.1);
      if (spectral_abscissa(plant.a - plant.b2 * cand) < -1e-3) {
        f0 = cand;
        break;
      }
    }
    const PolishResult res = polish_gain(plant, ones_mask(m, n), f0);
    CHECK(res.converged);
    CHECK((res.f - are.gain).frobenius_norm() <= 1e-6 * std::max(1.0, are.gain.frobenius_norm()));
  }
}

TEST_CASE("mask equal to the support of the centralized gain is a fixed point") {
  const Plant plant = mass_spring(3);
  const AreSolution are = solve_are(plant);
  const CardinalityReport rep = cardinality_report(are.gain);
  const PolishResult res = polish_gain(plant, rep.mask, are.gain);
  CHECK(res.converged);
  CHECK((res.f - are.gain).frobenius_norm() <= 1e-8 * are.gain.frobenius_norm());
}

TEST_CASE("structured polishing: iterates stay structured, objective decreases") {
  const Plant plant = mass_spring(4);  // 8 states, 4 inputs
  const AreSolution are = solve_are(plant);
  // keep only the dominant diagonal bands of both sub-gains
  StructureMask mask;
  mask.mask = Matrix(4, 8);
  for (int i = 0; i < 4; ++i) {
    mask.mask(i, i) = 1.0;
    mask.mask(i, 4 + i) = 1.0;
    if (i > 0) mask.mask(i, i - 1) = 1.0;
    if (i < 3) mask.mask(i, i + 1) = 1.0;
  }
  const GainMatrix f0 = project_structure(are.gain, mask);
  REQUIRE(spectral_abscissa(plant.a - plant.b2 * f0) < 0.0);
  const double j0 = objective(plant, f0);
  const PolishResult res = polish_gain(plant, mask, f0);
  CHECK(mask.admits(res.f));
  CHECK(res.j <= j0 + 1e-12);
  CHECK(res.j >= objective(plant, are.gain));  // centralized lower bound
  CHECK(spectral_abscissa(plant.a - plant.b2 * res.f) < 0.0);
  // gradient projected on the structure is small at the reported solution
  const GainMatrix gs = project_structure(gradient(plant, res.f), mask);
  CHECK(gs.frobenius_norm() <= 1e-5 * std::max(1.0, res.f.frobenius_norm()));
}

TEST_CASE("polish rejects bad starting points") {
  const Plant plant = mass_spring(2);
  const AreSolution are = solve_are(plant);
  StructureMask mask;
  mask.mask = Matrix(2, 4);
  mask.mask(0, 0) = 1.0;
  CHECK_THROWS_AS(polish_gain(plant, mask, are.gain), StructureError);
  // structured but destabilizing start
  const GainMatrix zero(2, 4);
  REQUIRE(spectral_abscissa(plant.a) >= 0.0);
  CHECK_THROWS_AS(polish_gain(plant, mask, project_structure(zero, mask)), StabilityError);
}
