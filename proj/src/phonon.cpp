#include "towers/phonon.hpp"

#include "towers/errors.hpp"

#include <cmath>
#include <limits>

namespace towers {

std::size_t PhononSpec::dimension() const {
  std::size_t d = 1;
  for (int n : n_max) d *= static_cast<std::size_t>(n + 1);
  return d;
}

void PhononSpec::validate(int n_sites) const {
  const auto modes = masses.size();
  if (frequencies.size() != modes || quartic.size() != modes || n_max.size() != modes)
    throw InputError("phonon arrays must all have one entry per mode");
  if (coupling.rows() != static_cast<Eigen::Index>(modes) || coupling.cols() != n_sites)
    throw InputError("phonon coupling must be modes x sites (" + std::to_string(modes) + " x " +
                     std::to_string(n_sites) + ")");
  if (!coupling.allFinite()) throw InputError("non-finite phonon coupling");
  for (std::size_t i = 0; i < modes; ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i]))
      throw InputError("phonon mass must be positive and finite");
    if (!(frequencies[i] > 0.0) || !std::isfinite(frequencies[i]))
      throw InputError("phonon frequency must be positive and finite");
    if (!(quartic[i] >= 0.0) || !std::isfinite(quartic[i]))
      throw InputError("quartic coefficient must be non-negative");
    if (n_max[i] < 1) throw InputError("n_max must be >= 1");
  }
}

PhononSpec holstein(int n_sites, double g, double omega, double mass, int n_max) {
  PhononSpec spec;
  const auto n = static_cast<std::size_t>(n_sites);
  spec.masses.assign(n, mass);
  spec.frequencies.assign(n, omega);
  spec.coupling = g * Eigen::MatrixXd::Identity(n_sites, n_sites);
  spec.quartic.assign(n, 0.0);
  spec.n_max.assign(n, n_max);
  return spec;
}

PhononModeOperators build_phonon_ops(const PhononSpec& spec, int mode) {
  if (mode < 0 || mode >= spec.n_modes()) throw InputError("phonon mode out of range");
  const auto i = static_cast<std::size_t>(mode);
  const double m = spec.masses[i];
  const double w = spec.frequencies[i];
  const int dim = spec.n_max[i] + 1;
  // Build in a slightly larger space so that products up to q^4 restricted
  // to the first `dim` levels are exact.
  const int big = dim + 4;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(big, big);
  for (int k = 1; k < big; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd q = (a + a.transpose()) / std::sqrt(2.0 * m * w);
  const Eigen::MatrixXd p_imag = std::sqrt(0.5 * m * w) * (a.transpose() - a);
  const Eigen::MatrixXd q2 = q * q;

  PhononModeOperators ops;
  ops.position = q.topLeftCorner(dim, dim);
  ops.momentum_imag = p_imag.topLeftCorner(dim, dim);
  ops.momentum_squared = (-(p_imag * p_imag)).topLeftCorner(dim, dim);
  ops.number = Eigen::VectorXd::LinSpaced(dim, 0.0, dim - 1.0).asDiagonal();
  ops.harmonic = (w * (ops.number.diagonal().array() + 0.5)).matrix().asDiagonal();
  ops.quartic = (q2 * q2).topLeftCorner(dim, dim);
  return ops;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Eigen::Index ka = 0; ka < a.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
      for (Eigen::Index kb = 0; kb < b.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
          triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                ia.value() * ib.value());
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

namespace {

SparseMatrix identity(std::size_t n) {
  SparseMatrix id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  id.setIdentity();
  return id;
}

// Embeds a single-mode operator into the multi-mode phonon space; mode 0 is
// the slowest index.
SparseMatrix embed_mode(const PhononSpec& spec, int mode, const Eigen::MatrixXd& op) {
  std::size_t before = 1;
  std::size_t after = 1;
  for (int j = 0; j < spec.n_modes(); ++j) {
    const auto d = static_cast<std::size_t>(spec.n_max[static_cast<std::size_t>(j)] + 1);
    if (j < mode) before *= d;
    if (j > mode) after *= d;
  }
  const SparseMatrix local = op.sparseView();
  return kron(kron(identity(before), local), identity(after));
}

}  // namespace

OperatorMatrix tensor_identity(const OperatorMatrix& electronic, std::size_t phonon_dim) {
  OperatorMatrix out = electronic;
  out.phonon_dim = electronic.phonon_dim * phonon_dim;
  out.matrix = kron(electronic.matrix, identity(phonon_dim));
  out.matrix.makeCompressed();
  return out;
}

OperatorMatrix build_ep_hamiltonian(const LatticeSpec& lattice, const PhononSpec& phonons,
                                    const SectorBasis& basis, std::size_t cap) {
  phonons.validate(lattice.n_sites());
  const std::size_t ph_dim = phonons.dimension();
  const std::size_t total = basis.size() * ph_dim;
  if (total > cap)
    throw CapExceeded("electron-phonon product dimension", static_cast<long long>(total),
                      static_cast<long long>(cap));

  OperatorMatrix h = tensor_identity(build_kinetic(lattice, basis), ph_dim);

  SparseMatrix phonon_part(static_cast<Eigen::Index>(ph_dim), static_cast<Eigen::Index>(ph_dim));
  std::vector<SparseMatrix> positions;
  for (int i = 0; i < phonons.n_modes(); ++i) {
    const auto ops = build_phonon_ops(phonons, i);
    const auto ii = static_cast<std::size_t>(i);
    Eigen::MatrixXd local = ops.harmonic;
    if (phonons.quartic[ii] != 0.0) local += phonons.quartic[ii] * ops.quartic;
    phonon_part += embed_mode(phonons, i, local);
    positions.push_back(embed_mode(phonons, i, ops.position));
  }
  h.matrix += kron(identity(basis.size()), phonon_part);

  for (int x = 0; x < lattice.n_sites(); ++x) {
    SparseMatrix g_x(static_cast<Eigen::Index>(ph_dim), static_cast<Eigen::Index>(ph_dim));
    bool any = false;
    for (int i = 0; i < phonons.n_modes(); ++i) {
      const double g = phonons.coupling(i, x);
      if (g == 0.0) continue;
      g_x += g * positions[static_cast<std::size_t>(i)];
      any = true;
    }
    if (!any) continue;
    h.matrix += kron(build_charge(x, basis).matrix, g_x);
  }
  h.matrix.prune(0.0);
  h.matrix.makeCompressed();
  h.symmetric = true;
  return h;
}

BoundednessReport check_boundedness(const LatticeSpec& lattice, const PhononSpec& phonons) {
  for (double w : phonons.frequencies)
    if (!(w > 0.0)) throw InputError("phonon frequency must be positive");
  phonons.validate(lattice.n_sites());

  BoundednessReport report;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lattice.hopping(),
                                                           Eigen::EigenvaluesOnly);
  report.trace_abs_hopping = eig.eigenvalues().cwiseAbs().sum();

  const int n = lattice.n_sites();
  const int modes = phonons.n_modes();
  Eigen::VectorXd stiffness(modes);
  for (int i = 0; i < modes; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    stiffness(i) = phonons.masses[ii] * phonons.frequencies[ii] * phonons.frequencies[ii];
  }

  // -2|z| = min over σ = ±1 of -2σz, so the infimum splits into one
  // quadratic minimisation per sign pattern. σ and -σ give the same value.
  double best = 0.0;
  Eigen::VectorXd best_q = Eigen::VectorXd::Zero(modes);
  Eigen::VectorXd sigma(n);
  const long long patterns = 1LL << (n - 1);
  for (long long bits = 0; bits < patterns; ++bits) {
    for (int x = 0; x < n; ++x) sigma(x) = (x > 0 && ((bits >> (x - 1)) & 1)) ? -1.0 : 1.0;
    const Eigen::VectorXd b = 2.0 * phonons.coupling * sigma;
    const Eigen::VectorXd q = b.cwiseQuotient(stiffness);
    const double value = -0.5 * b.dot(q);
    if (value < best) {
      best = value;
      best_q = q;
    }
  }
  report.lower_bound = -2.0 * report.trace_abs_hopping + best;
  report.minimizer = best_q;
  report.bounded = true;
  for (double l : phonons.quartic) report.has_quartic = report.has_quartic || l > 0.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(phonons.coupling.transpose());
  report.coupling_rank = static_cast<int>(lu.rank());
  report.couplings_independent = report.coupling_rank == n;

  report.note =
      "criterion read as: the expression is bounded below over q; the quadratic phonon energy "
      "dominates the linear coupling whenever every frequency is positive";
  if (report.has_quartic) report.note += "; quartic terms only raise the harmonic lower bound";
  return report;
}

}  // namespace towers
