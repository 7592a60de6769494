#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sparsegain/model.hpp"

namespace sparsegain {

/// Chain of N unit masses with unit springs, states [positions; velocities]:
///   A = [[O, I], [T, O]], B1 = B2 = [[O], [I]], Q = I, R = r_scale·I,
/// with T the tridiagonal Toeplitz matrix diag(-2) + superdiag(1) + subdiag(1).
Plant mass_spring(int n_masses, double r_scale = 10.0);

/// N second-order unstable nodes placed uniformly at random in a
/// side x side square, coupled through exp(-distance) between node pairs.
struct NetworkPlant {
  Plant plant;
  std::vector<std::array<double, 2>> positions;
  std::uint64_t seed = 0;
};

/// Deterministic under `seed` (mt19937_64 with a fixed bit-to-double mapping,
/// so runs reproduce bit-exactly across platforms).
NetworkPlant random_network(int n_nodes, double side = 10.0, std::uint64_t seed = 1);

/// Five three-state subsystems with cyclic negative feedback coupled through
/// difference terms; the gain is partitioned into 25 blocks of size 1x3.
struct BiochemProblem {
  Plant plant;
  BlockPartition partition;
};

BiochemProblem biochemical();

}  // namespace sparsegain
