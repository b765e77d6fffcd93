#pragma once

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"
#include "towers/operators.hpp"
#include "towers/phonon.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace towers {

// A spin-like quantum number stored as twice its value.
struct HalfInt {
  int twice = 0;

  static HalfInt from_twice(int t) { return HalfInt{t}; }
  double value() const { return 0.5 * twice; }
  double casimir() const { return value() * (value() + 1.0); }
  bool is_integer() const { return twice % 2 == 0; }
  std::string str() const;

  friend bool operator==(const HalfInt&, const HalfInt&) = default;
  friend auto operator<=>(const HalfInt&, const HalfInt&) = default;
};

// Nearest half-integer q >= 0 with q(q+1) closest to `casimir_value`.
HalfInt round_casimir(double casimir_value);

struct SpectrumOptions {
  std::size_t dense_cap = 4096;   // larger matrices go to the iterative solver
  int lowest_k = 8;               // eigenpairs requested from the iterative solver
  double degeneracy_tol = 1e-8;   // relative gap below which levels cluster
  double label_tol = 1e-6;        // max |λ - q(q+1)| for a Casimir label
};

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
  bool partial = false;     // only the lowest eigenpairs were computed
};

/**
 * Dense symmetric eigendecomposition up to `options.dense_cap`, Lanczos with
 * deflation for the lowest `options.lowest_k` pairs above it. Each vector's
 * largest-magnitude component is made positive. Throws InputError for a
 * non-symmetric matrix and SolverError on non-convergence.
 */
EigenSystem diagonalize(const OperatorMatrix& h, const SpectrumOptions& options = {});

// Lowest k eigenpairs of a symmetric sparse matrix via Lanczos with full
// reorthogonalization, one locked pair at a time.
EigenSystem lanczos_lowest(const SparseMatrix& h, int k, double tol = 1e-10);

// Index ranges [begin, end) of eigenvalues whose adjacent gaps are below
// tol * (1 + |E|).
std::vector<std::pair<int, int>> degeneracy_clusters(const Eigen::VectorXd& values, double tol);

struct SpectrumRecord {
  double energy = 0.0;
  Sector sector;
  HalfInt s;
  HalfInt m;
  std::optional<HalfInt> j;
  HalfInt m_j;
  int cluster = 0;  // degeneracy cluster within the sector
  double casimir_residual = 0.0;
};

struct LabeledSpectrum {
  Sector sector;
  std::vector<SpectrumRecord> records;  // one per eigenvector, ascending energy
  Eigen::MatrixXd vectors;              // rotated so that S² (and J²) are diagonal
  bool partial = false;
};

/**
 * Rotates eigenvectors inside each degeneracy cluster of H to diagonalize S²
 * (then J² inside equal-s groups) and rounds the Casimir eigenvalues to
 * labels. Throws LabelingError when a Casimir does not commute with H or a
 * label residual exceeds options.label_tol.
 */
LabeledSpectrum resolve_quantum_numbers(const OperatorMatrix& h, const OperatorMatrix& s_squared,
                                        const OperatorMatrix* j_squared, const EigenSystem& eig,
                                        int n_sites, const SpectrumOptions& options = {});

// The operators needed to solve and label one sector.
struct SectorProblem {
  OperatorMatrix hamiltonian;
  OperatorMatrix spin_casimir;
  std::optional<OperatorMatrix> pseudospin_casimir;
};

using SectorBuilder = std::function<SectorProblem(Sector)>;

enum class PseudospinLabels { Auto, Force, Off };

// Hubbard sectors. Auto labels j only when pseudospin is a symmetry
// (bipartite, no t_xx, uniform U); Force builds J² whenever a bipartition
// exists.
SectorBuilder hubbard_problem(const LatticeSpec& spec, PseudospinLabels labels = PseudospinLabels::Auto);

// Electron-phonon sectors; S² acts on the electronic factor only.
SectorBuilder electron_phonon_problem(const LatticeSpec& lattice, const PhononSpec& phonons,
                                      std::size_t cap = kDefaultProductCap);

LabeledSpectrum solve_sector(const SectorBuilder& builder, Sector sector, int n_sites,
                             const SpectrumOptions& options = {});

// Solves sectors in parallel; results come back in input order.
std::vector<LabeledSpectrum> solve_sectors(const SectorBuilder& builder,
                                           const std::vector<Sector>& sectors, int n_sites,
                                           const SpectrumOptions& options = {});

std::vector<Sector> sectors_with_electrons(int n_sites, int n_electrons);
std::vector<Sector> all_sectors(int n_sites);

struct GroundStateReport {
  int n_electrons = 0;
  double energy = 0.0;
  int degeneracy = 0;              // levels within tolerance across all sectors
  HalfInt s;
  std::optional<HalfInt> j;
  bool labels_consistent = false;  // every ground level carries the same s (and j)
  bool unique = false;             // degeneracy == 2s + 1 and labels consistent
  std::vector<SpectrumRecord> ground_records;
};

// Ground state over all sectors with N_↑ + N_↓ = n_electrons.
GroundStateReport ground_state_report(const SectorBuilder& builder, int n_sites, int n_electrons,
                                      const SpectrumOptions& options = {});
GroundStateReport ground_state_report(const std::vector<LabeledSpectrum>& spectra, int n_electrons,
                                      const SpectrumOptions& options = {});

enum class TowerKind { Spin, Pseudospin };

struct TowerScope {
  enum class Kind { FixedSector, FixedElectrons, All };
  Kind kind = Kind::All;
  Sector sector;
  int n_electrons = 0;

  static TowerScope fixed_sector(Sector s) { return {Kind::FixedSector, s, 0}; }
  static TowerScope fixed_electrons(int n) { return {Kind::FixedElectrons, {}, n}; }
  static TowerScope all() { return {}; }
};

struct TowerEntry {
  HalfInt value;
  double min_energy = 0.0;
};

struct TowerReport {
  TowerKind kind = TowerKind::Spin;
  std::vector<TowerEntry> entries;                  // ascending value
  std::vector<std::pair<HalfInt, HalfInt>> violations;  // (v, v + 1) with E(v + 1) <= E(v)
  bool strict = false;
  std::optional<double> min_gap;  // smallest E(v + 1) - E(v) over adjacent entries

  // No violation among adjacent pairs whose lower value is >= `from`.
  bool strict_from(HalfInt from) const;
};

TowerReport extract_tower(const std::vector<SpectrumRecord>& records, TowerKind kind,
                          const TowerScope& scope, double degeneracy_tol = 1e-8);

// Flattens several labeled sectors into one record list.
std::vector<SpectrumRecord> collect_records(const std::vector<LabeledSpectrum>& spectra);

}  // namespace towers
