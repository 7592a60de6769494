#include "sparsegain/problems.hpp"

#include <cmath>
#include <random>

#include "sparsegain/errors.hpp"

namespace sparsegain {

Plant mass_spring(int n_masses, double r_scale) {
  if (n_masses < 1) throw DimensionError("mass_spring: need at least one mass");
  const int n = n_masses;
  Plant plant;
  plant.a = Matrix(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    plant.a(i, n + i) = 1.0;
    plant.a(n + i, i) = -2.0;
    if (i > 0) plant.a(n + i, i - 1) = 1.0;
    if (i + 1 < n) plant.a(n + i, i + 1) = 1.0;
  }
  plant.b2 = Matrix(2 * n, n);
  for (int i = 0; i < n; ++i) plant.b2(n + i, i) = 1.0;
  plant.b1 = plant.b2;
  plant.q = Matrix::identity(2 * n);
  plant.r = r_scale * Matrix::identity(n);
  return plant;
}

NetworkPlant random_network(int n_nodes, double side, std::uint64_t seed) {
  if (n_nodes < 1) throw DimensionError("random_network: need at least one node");
  NetworkPlant net;
  net.seed = seed;

  // mt19937_64 output mapped to [0,1) through the top 53 bits; both steps are
  // fully specified, so the geometry is reproducible bit-exactly everywhere.
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  net.positions.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    net.positions[i][0] = side * unit();
    net.positions[i][1] = side * unit();
  }

  const int n = 2 * n_nodes;
  Plant& plant = net.plant;
  plant.a = Matrix(n, n);
  for (int i = 0; i < n_nodes; ++i) {
    plant.a(2 * i, 2 * i) = 1.0;
    plant.a(2 * i, 2 * i + 1) = 1.0;
    plant.a(2 * i + 1, 2 * i) = 1.0;
    plant.a(2 * i + 1, 2 * i + 1) = 2.0;
    for (int j = 0; j < n_nodes; ++j) {
      if (j == i) continue;
      const double dx = net.positions[i][0] - net.positions[j][0];
      const double dy = net.positions[i][1] - net.positions[j][1];
      const double w = std::exp(-std::sqrt(dx * dx + dy * dy));
      // The neighbor state vector enters both local state equations.
      plant.a(2 * i, 2 * j) += w;
      plant.a(2 * i + 1, 2 * j + 1) += w;
    }
  }
  plant.b2 = Matrix(n, n_nodes);
  for (int i = 0; i < n_nodes; ++i) plant.b2(2 * i + 1, i) = 1.0;
  plant.b1 = plant.b2;
  plant.q = Matrix::identity(n);
  plant.r = Matrix::identity(n_nodes);
  return net;
}

BiochemProblem biochemical() {
  constexpr int kSubsystems = 5;
  constexpr int kStates = 3;
  const int n = kSubsystems * kStates;

  const Matrix local(kStates, kStates,
                     {-1.0, 0.0, -3.0,  //
                      3.0, -1.0, 0.0,   //
                      0.0, 3.0, -1.0});

  BiochemProblem prob;
  Plant& plant = prob.plant;
  plant.a = Matrix(n, n);
  for (int i = 0; i < kSubsystems; ++i) {
    plant.a.set_block(i * kStates, i * kStates, local);
    // Coupling -(1/2) Σ_j (i-j)(x_i - x_j): the x_i part shifts the diagonal
    // block, the x_j part fills the off-diagonal blocks with (1/2)(i-j)·I.
    double diag_shift = 0.0;
    for (int j = 0; j < kSubsystems; ++j) {
      if (j == i) continue;
      const double cij = 0.5 * static_cast<double>(i - j);
      diag_shift -= cij;
      for (int k = 0; k < kStates; ++k)
        plant.a(i * kStates + k, j * kStates + k) += cij;
    }
    for (int k = 0; k < kStates; ++k) plant.a(i * kStates + k, i * kStates + k) += diag_shift;
  }

  plant.b1 = Matrix(n, n);
  for (int i = 0; i < n; ++i) plant.b1(i, i) = 3.0;
  plant.b2 = Matrix(n, kSubsystems);
  for (int i = 0; i < kSubsystems; ++i) plant.b2(i * kStates, i) = 3.0;
  plant.q = Matrix::identity(n);
  plant.r = Matrix::identity(kSubsystems);

  prob.partition.row_sizes.assign(kSubsystems, 1);
  prob.partition.col_sizes.assign(kSubsystems, kStates);
  return prob;
}

}  // namespace sparsegain
