#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace towers {

// A single hopping entry t_xy between sites x and y (0-based).
struct Bond {
  int x = 0;
  int y = 0;
  double t = 0.0;
};

/**
 * The finite graph Λ with real symmetric hopping t_xy, on-site interactions
 * U_x, and an optional sublattice assignment ε(x) ∈ {0, 1}.
 *
 * Immutable after construction. Site indices are 0-based here; external
 * formats are 1-based.
 */
class LatticeSpec {
 public:
  LatticeSpec(Eigen::MatrixXd hopping, std::vector<double> interactions,
              std::optional<std::vector<int>> bipartition = std::nullopt);

  int n_sites() const { return static_cast<int>(interactions_.size()); }
  const Eigen::MatrixXd& hopping() const { return hopping_; }
  double hopping(int x, int y) const { return hopping_(x, y); }
  const std::vector<double>& interactions() const { return interactions_; }
  double interaction(int x) const { return interactions_[static_cast<std::size_t>(x)]; }
  const std::optional<std::vector<int>>& bipartition() const { return bipartition_; }

  // Bonds with x <= y and t_xy != 0, row-major order. Includes diagonal terms.
  std::vector<Bond> bonds() const;
  bool has_diagonal_hopping() const;
  bool uniform_interaction() const;

  // Same graph and hopping, different interactions (used by the
  // particle-hole map and by interaction sweeps).
  LatticeSpec with_interactions(std::vector<double> interactions) const;

 private:
  Eigen::MatrixXd hopping_;
  std::vector<double> interactions_;
  std::optional<std::vector<int>> bipartition_;
};

// Assembles a spec from a bond list; duplicate bonds are summed and t_xx is
// allowed. Throws InputError on bad indices or non-finite values.
LatticeSpec build_lattice(int n_sites, const std::vector<Bond>& bonds,
                          const std::vector<double>& interactions,
                          std::optional<std::vector<int>> bipartition = std::nullopt);

struct BipartitionReport {
  bool is_bipartite = false;
  int size_a = 0;
  int size_b = 0;
  std::vector<int> assignment;        // ε(x), empty when not bipartite
  std::vector<int> odd_cycle;         // certificate when not bipartite
  bool has_diagonal_hopping = false;  // t_xx != 0 somewhere
};

// BFS two-coloring of the bond graph (t_xy != 0, x != y). Each component's
// lowest-index site gets color 0.
BipartitionReport detect_bipartition(const LatticeSpec& spec);

struct ConnectivityReport {
  bool connected = false;
  std::vector<std::vector<int>> components;  // ascending, by lowest site
};

ConnectivityReport is_connected(const LatticeSpec& spec);

// Sublattice assignment to use for pseudospin operators: the explicit one
// when present, otherwise the detected two-coloring, otherwise none.
std::optional<std::vector<int>> resolve_bipartition(const LatticeSpec& spec);

// Pseudospin is a symmetry only for bipartite hopping without diagonal terms
// and uniform U.
bool pseudospin_symmetric(const LatticeSpec& spec);

/**
 * 1D Lieb-type chain: each cell has a hub on sublattice A bonded to two rim
 * sites on sublattice B, and the second rim of cell c is bonded to the hub of
 * cell c+1. Site order per cell is (hub, rim, rim). Bonds carry t_xy = -t.
 */
LatticeSpec generate_lieb_chain(int unit_cells, double t, double u);

// Open chain with t_xy = -t between neighbours and uniform U.
LatticeSpec generate_chain(int n_sites, double t, double u);

}  // namespace towers
