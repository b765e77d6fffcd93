#pragma once

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace towers {

using SparseMatrix = Eigen::SparseMatrix<double>;

/**
 * Matrix of an operator from the `source` sector (columns) to the `target`
 * sector (rows). When `phonon_dim` > 1 the electronic index is the slow one:
 * row = electronic * phonon_dim + phonon.
 *
 * A target sector outside the physical range (e.g. S+ on the fully polarized
 * sector) is represented by a matrix with zero rows.
 */
struct OperatorMatrix {
  int n_sites = 0;
  Sector source;
  Sector target;
  std::size_t phonon_dim = 1;
  SparseMatrix matrix;
  bool symmetric = false;

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }

  // "row col value" lines, 1-based, row-major, %.17g.
  std::string to_coordinate_text() const;
};

// H = Σ_σ Σ_xy t_xy c†_xσ c_yσ + Σ_x U_x n_x↑ n_x↓ on one sector.
OperatorMatrix build_hubbard(const LatticeSpec& spec, const SectorBasis& basis);

// Hopping part only. On an (N, 0) basis this is the single-spin K.
OperatorMatrix build_kinetic(const LatticeSpec& spec, const SectorBasis& basis);

// n_x↑ + n_x↓. On an (N, 0) basis this is the single-spin occupancy L_x.
OperatorMatrix build_charge(int site, const SectorBasis& basis);

// Σ_x U_x n_x↑ n_x↓.
OperatorMatrix build_interaction(const LatticeSpec& spec, const SectorBasis& basis);

struct SpinOperators {
  OperatorMatrix s_z;
  OperatorMatrix s_plus;   // (a, b) -> (a + 1, b - 1)
  OperatorMatrix s_minus;  // (a, b) -> (a - 1, b + 1)
  OperatorMatrix s_squared;
};

SpinOperators build_spin_ops(int n_sites, Sector sector);

// S+ and S- mapping `sector` to its neighbours; exposed for S- S+ products.
OperatorMatrix build_spin_raise(int n_sites, Sector sector);
OperatorMatrix build_spin_lower(int n_sites, Sector sector);

struct PseudospinOperators {
  OperatorMatrix j_z;
  OperatorMatrix j_plus;   // (a, b) -> (a + 1, b + 1)
  OperatorMatrix j_minus;  // (a, b) -> (a - 1, b - 1)
  OperatorMatrix j_squared;
};

/*
 * J+ = Σ_x (-1)^ε(x) c†_x↑ c†_x↓,  J- = (J+)† = Σ_x (-1)^ε(x) c_x↓ c_x↑,
 * J_z = (N_↑ + N_↓ - |Λ|) / 2. Needs a sublattice assignment; throws
 * InputError when the lattice has none.
 */
PseudospinOperators build_pseudospin_ops(const LatticeSpec& spec, Sector sector);
OperatorMatrix build_pair_raise(const std::vector<int>& parity, Sector sector);
OperatorMatrix build_pair_lower(const std::vector<int>& parity, Sector sector);

// Π^X = n_x1 ... n_xN on a single-spin (N, 0) basis.
OperatorMatrix build_projector(const std::vector<int>& sites, const SectorBasis& basis);

// Largest |entry| of a sparse matrix, and its maximum absolute column sum.
double max_abs(const SparseMatrix& m);
double one_norm(const SparseMatrix& m);

// Residual of lhs * x - x * rhs - scale * x with the tolerance scale
// max(1, ‖lhs x‖₁ + ‖x rhs‖₁). Used for [H, X] = scale X checks where H acts
// as `rhs` on the source sector and as `lhs` on the target sector.
struct CommutatorCheck {
  double residual = 0.0;
  double norm = 0.0;
  bool ok(double rel_tol = 1e-12) const { return residual <= rel_tol * norm; }
};

CommutatorCheck intertwining_residual(const SparseMatrix& lhs, const SparseMatrix& x,
                                      const SparseMatrix& rhs, double scale = 0.0);

}  // namespace towers
