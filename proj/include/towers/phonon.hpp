#pragma once

#include "towers/lattice.hpp"
#include "towers/operators.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace towers {

/**
 * Phonon modes coupled linearly to the local charge:
 *
 *   G_x(q) = Σ_i g_ix q_i,   V_an(q) = Σ_i λ_i q_i^4,
 *
 * each mode truncated to oscillator levels 0..n_max[i]. Hopping is taken
 * from the lattice and does not depend on q.
 */
struct PhononSpec {
  std::vector<double> masses;
  std::vector<double> frequencies;
  Eigen::MatrixXd coupling;  // modes x sites
  std::vector<double> quartic;
  std::vector<int> n_max;

  int n_modes() const { return static_cast<int>(masses.size()); }
  std::size_t dimension() const;

  // Throws InputError on inconsistent sizes, non-positive mass or frequency,
  // negative quartic terms, or n_max < 1.
  void validate(int n_sites) const;
};

// One Einstein mode per site with G_x = g q_x.
PhononSpec holstein(int n_sites, double g, double omega, double mass, int n_max);

// Operators of one mode in the truncated number basis. The momentum is
// p = i * momentum_imag. All matrices are exact projections of the
// untruncated operators onto levels 0..n_max.
struct PhononModeOperators {
  Eigen::MatrixXd position;
  Eigen::MatrixXd momentum_imag;
  Eigen::MatrixXd momentum_squared;
  Eigen::MatrixXd number;
  Eigen::MatrixXd harmonic;  // p^2/2m + m ω^2 q^2 / 2 = ω (n + 1/2)
  Eigen::MatrixXd quartic;   // q^4
};

PhononModeOperators build_phonon_ops(const PhononSpec& spec, int mode);

// Default cap on electronic sector dimension x phonon dimension.
inline constexpr std::size_t kDefaultProductCap = 1'000'000;

/*
 * H_ep = K ⊗ I + Σ_x Σ_i g_ix n_x ⊗ q_i + I ⊗ Σ_i [ω_i (n_i + 1/2) + λ_i q_i^4]
 * on basis ⊗ phonon space. The lattice interactions U_x are not used.
 * Throws CapExceeded when the product dimension exceeds `cap`.
 */
OperatorMatrix build_ep_hamiltonian(const LatticeSpec& lattice, const PhononSpec& phonons,
                                    const SectorBasis& basis,
                                    std::size_t cap = kDefaultProductCap);

// A ⊗ I on the phonon space, preserving the sector bookkeeping.
OperatorMatrix tensor_identity(const OperatorMatrix& electronic, std::size_t phonon_dim);

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b);

struct BoundednessReport {
  bool bounded = false;
  double trace_abs_hopping = 0.0;  // Tr|t|
  double lower_bound = 0.0;        // harmonic-family minimum of the criterion
  Eigen::VectorXd minimizer;       // q at which it is attained
  bool has_quartic = false;
  int coupling_rank = 0;           // rank of ∂G_x/∂q_j = g^T
  bool couplings_independent = false;
  std::string note;
};

/*
 * Evaluates inf_q [-2 Tr|t| - 2 Σ_x |G_x(q)| + ½ Σ_i m_i ω_i² q_i² + V_an(q)]
 * for the linear family. Without quartic terms the infimum is attained and
 * reported exactly; with them the harmonic value is a lower bound.
 */
BoundednessReport check_boundedness(const LatticeSpec& lattice, const PhononSpec& phonons);

}  // namespace towers
