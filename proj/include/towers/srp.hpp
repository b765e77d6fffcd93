#pragma once

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"
#include "towers/operators.hpp"
#include "towers/spectra.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace towers {

/**
 * An (N, N) sector wavefunction viewed as the d x d matrix Ψ(X, Y), rows
 * indexed by up configurations X and columns by down configurations Y, both
 * in ascending mask order (d = C(|Λ|, N)).
 *
 * The self-adjoint representative is phase * values. For a real eigenvector
 * the raw matrix is either symmetric (phase 1) or antisymmetric (phase i).
 */
struct PsiMatrix {
  int n_sites = 0;
  int n_per_spin = 0;
  Eigen::MatrixXd values;  // Frobenius norm 1
  std::complex<double> phase{1.0, 0.0};
  double hermiticity_residual = 0.0;
  int ground_degeneracy = 1;
  // For a degenerate ground space: an orthonormal basis of its symmetric
  // (spin-reflection even) part, reshaped.
  std::vector<Eigen::MatrixXd> symmetric_ground_space;

  Eigen::Index dim() const { return values.rows(); }
  Eigen::MatrixXcd self_adjoint() const { return phase * values.cast<std::complex<double>>(); }
  Eigen::VectorXd flatten() const;
};

// Reshapes one normalized (N, N)-sector vector. Throws InputError unless the
// basis has N_up == N_down.
PsiMatrix reshape_to_matrix(const Eigen::VectorXd& vector, const SectorBasis& basis);

// Reshapes a (possibly degenerate) ground space given as orthonormal
// columns. With more than one column, picks the spin-reflection even
// combination when one exists.
PsiMatrix reshape_ground_space(const Eigen::MatrixXd& ground_vectors, const SectorBasis& basis);

struct EnergyEvaluation {
  double energy = 0.0;
  double trace_form = 0.0;      // matrix-trace evaluation
  double quadratic_form = 0.0;  // <v|H|v>/<v|v> on the flattened vector
  bool attractive_form = false; // every U_x <= 0, so -|U_x| was used
};

/**
 * E(Ψ) for (N, N) wavefunctions on a lattice, evaluated two ways:
 *
 *   [Tr(Ψ† K Ψ) + Tr(Ψ K Ψ†) - Σ_x |U_x| Tr(Ψ† L_x Ψ L_x)] / Tr(Ψ† Ψ)
 *
 * with single-spin K and L_x, and as the Rayleigh quotient of the sector
 * Hamiltonian. The two must agree to 1e-9. For non-attractive U the signed
 * U_x replaces -|U_x| and `attractive_form` is false.
 */
class EnergyFunctional {
 public:
  EnergyFunctional(const LatticeSpec& spec, int n_per_spin);

  EnergyEvaluation evaluate(const Eigen::MatrixXcd& psi) const;
  EnergyEvaluation evaluate(const PsiMatrix& psi) const { return evaluate(psi.self_adjoint()); }

  double trace_form(const Eigen::MatrixXcd& psi) const;
  double quadratic_form(const Eigen::MatrixXcd& psi) const;

  const Eigen::MatrixXd& kinetic() const { return kinetic_; }
  const std::vector<Eigen::VectorXd>& charges() const { return charges_; }
  const SectorBasis& sector_basis() const { return sector_basis_; }
  const SparseMatrix& hamiltonian() const { return hamiltonian_; }

 private:
  std::vector<double> interactions_;
  bool attractive_;
  Eigen::MatrixXd kinetic_;               // d x d
  std::vector<Eigen::VectorXd> charges_;  // diagonals of L_x
  SectorBasis sector_basis_;
  SparseMatrix hamiltonian_;
};

// |Ψ| = sqrt(Ψ²) of a self-adjoint matrix via its eigendecomposition.
Eigen::MatrixXcd matrix_abs(const Eigen::MatrixXcd& psi);

struct WitnessReport {
  double e0 = 0.0;
  double e_abs_psi = 0.0;
  double trace_abs = 0.0;
  double max_diag = 0.0;
  double psd_min_eig = 0.0;  // of ±Ψ, sign chosen so that Tr Ψ >= 0
  bool psi_was_psd = false;
  bool energy_ok = false;    // E(|Ψ|) - E0 <= 1e-8
  bool trace_ok = false;     // Tr|Ψ| > 0
  bool diagonal_ok = false;  // some |Ψ|(X0, X0) > 1e-10
  int ground_degeneracy = 1;
  // Degenerate ground spaces only: whether a PSD representative was found
  // (searched for two-dimensional symmetric spaces, nullopt otherwise).
  std::optional<bool> psd_representative;

  bool pass() const { return energy_ok && trace_ok && diagonal_ok; }
};

WitnessReport positivity_witness(const PsiMatrix& psi, const EnergyFunctional& energy, double e0);

// Ground state of the (N, N) sector, reshaped, with its witness.
struct SrpAnalysis {
  double e0 = 0.0;
  PsiMatrix psi;
  WitnessReport witness;
};

SrpAnalysis analyze_srp(const LatticeSpec& spec, int n_per_spin, const SpectrumOptions& options = {});

}  // namespace towers
