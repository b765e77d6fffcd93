#pragma once

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"
#include "towers/operators.hpp"
#include "towers/spectra.hpp"

#include <optional>
#include <vector>

namespace towers {

/**
 * Particle-hole transformation on the up spins only:
 *
 *   c_x↑ -> (-1)^ε(x) c†_x↑,   c_x↓ -> c_x↓.
 *
 * Sector (a, b) of the model with interaction U goes to sector (|Λ| - a, b)
 * of the model with -U, and H_source = P† (H_target + U N_↓) P.
 *
 * The basis state |A, B> maps to sign * |Λ∖A, B> with
 * sign = (-1)^(|Λ| |B|) Π_{a∈A} (-1)^(ε(a) + a).
 */
struct PphMap {
  LatticeSpec source_spec;
  Sector source;
  LatticeSpec target_spec;  // interactions negated
  Sector target;
  double energy_shift = 0.0;  // U * N_↓
  std::vector<std::size_t> target_index;  // per source basis index
  std::vector<int> sign;                  // ±1 per source basis index

  int n_sites() const { return source_spec.n_sites(); }
  std::size_t dimension() const { return target_index.size(); }
  // Signed permutation matrix, target rows by source columns.
  SparseMatrix matrix() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& source_vector) const;
};

// Throws InputError for a lattice without bipartition or with non-uniform U,
// and for a sector out of range.
PphMap build_pph(const LatticeSpec& spec, Sector sector);

struct LevelMatch {
  double source_energy = 0.0;
  double target_energy = 0.0;  // shifted back: E_target + U N_↓
  double deviation = 0.0;
};

struct CorrespondenceReport {
  double operator_deviation = 0.0;  // max |P H_s Pᵀ - H_t - shift I|
  double spectral_deviation = 0.0;  // max over sorted levels
  std::optional<int> first_mismatch;
  std::vector<LevelMatch> levels;

  bool pass(double operator_tol = 1e-12, double spectral_tol = 1e-9) const {
    return operator_deviation < operator_tol && spectral_deviation < spectral_tol;
  }
};

CorrespondenceReport verify_spectral_correspondence(const PphMap& map,
                                                    const SpectrumOptions& options = {});

struct LabelSwapMatch {
  int source_level = 0;
  int target_level = 0;  // labeled target record with the largest overlap
  double energy = 0.0;
  HalfInt s_source, j_source, m_source, m_j_source;
  HalfInt s_target, j_target, m_target, m_j_target;
  double overlap = 0.0;
  double casimir_residual = 0.0;  // of P v against the swapped Casimir values
  bool ok = false;
};

struct LabelSwapReport {
  std::vector<LabelSwapMatch> levels;
  double max_casimir_residual = 0.0;
  int mismatches = 0;

  bool pass() const { return mismatches == 0; }
};

// Both spectra need s and j labels (a pseudospin-symmetric lattice).
LabelSwapReport verify_label_swap(const PphMap& map, const LabeledSpectrum& source,
                                  const LabeledSpectrum& target, double tol = 1e-6);

}  // namespace towers
