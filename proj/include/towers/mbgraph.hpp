#pragma once

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"

#include <vector>

namespace towers {

// An unordered set of N occupied sites, stored as a bitmask.
struct ConfigNode {
  Mask occupied = 0;

  int size() const { return popcount(occupied); }
  bool contains(int site) const { return (occupied >> site & 1u) != 0; }
  std::vector<int> sites() const;
  static ConfigNode from_sites(const std::vector<int>& sites, int n_sites);

  friend bool operator==(const ConfigNode&, const ConfigNode&) = default;
  friend auto operator<=>(const ConfigNode&, const ConfigNode&) = default;
};

// One marker hop from `from` to `to` along a bond with t_xy != 0.
struct ConfigMove {
  int from = 0;
  int to = 0;
  double t = 0.0;
};

struct ConfigPath {
  std::vector<ConfigNode> nodes;  // X_1 ... X_m
  std::vector<ConfigMove> moves;  // moves[i] takes nodes[i] to nodes[i + 1]

  std::size_t length() const { return moves.size(); }
};

/**
 * Connects X to Y in the configuration graph by moving markers along bonds.
 * Targets y ∈ Y∖X are filled in ascending order; for each, a BFS in Λ from y
 * (neighbours in ascending order) finds the nearest marker not sitting on a
 * site of Y, and the markers along that site path are shifted one slot
 * towards y, nearest first. Revisited configurations are spliced out.
 *
 * Throws InputError when |X| != |Y| or when Λ is disconnected.
 */
ConfigPath find_path(const LatticeSpec& spec, ConfigNode x, ConfigNode y);

// Checks that consecutive nodes differ by the recorded legal move and that
// no node repeats. Returns an empty string when valid, otherwise a reason.
std::string validate_path(const LatticeSpec& spec, const ConfigPath& path);

struct ChainProduct {
  double value = 0.0;          // <X_m| Π^{X_m} K ... K Π^{X_1} |X_1>
  double expected_abs = 0.0;   // Π |t| over the moves
  bool nonzero = false;
};

// Multiplies the single-spin K and projectors along the path. Throws
// InputError for an invalid path (including a step with t = 0).
ChainProduct verify_chain_product(const LatticeSpec& spec, const ConfigPath& path);

struct CensusReport {
  int n_particles = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  int components = 0;
  bool lattice_connected = false;
  std::vector<int> component_sizes;  // ascending by lowest node

  // Λ connected implies the configuration graph is connected.
  bool consistent() const { return !lattice_connected || components == 1; }
};

inline constexpr std::size_t kDefaultCensusCap = 5000;

// Builds the configuration graph for N particles explicitly. Throws
// CapExceeded when C(|Λ|, N) exceeds `cap`.
CensusReport connectivity_census(const LatticeSpec& spec, int n_particles,
                                 std::size_t cap = kDefaultCensusCap);

}  // namespace towers
