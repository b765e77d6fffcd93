#pragma once

#include "towers/lattice.hpp"

#include <cstdint>
#include <random>

namespace towers {

struct RandomLatticeOptions {
  int min_sites = 3;
  int max_sites = 6;
  double extra_bond_probability = 0.35;
  double t_min = 0.2;  // |t| range; the sign is random
  double t_max = 1.5;
  double diagonal_probability = 0.0;  // chance of a t_xx term per site
  double u_min = -3.0;
  double u_max = -0.2;
  bool uniform_u = false;
};

// Connected graph: random spanning tree over a shuffled site order plus
// extra bonds, each present with `extra_bond_probability`.
LatticeSpec random_connected_lattice(std::mt19937_64& rng, const RandomLatticeOptions& options = {});

// Case `index` of the family seeded by `seed`; independent of other cases.
LatticeSpec random_case(std::uint64_t seed, std::uint64_t index, const RandomLatticeOptions& options = {});

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace towers
