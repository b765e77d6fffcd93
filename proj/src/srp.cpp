#include "towers/srp.hpp"

#include "towers/errors.hpp"

#include <cmath>
#include <numbers>

namespace towers {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

Eigen::MatrixXd reshape_raw(const Eigen::VectorXd& v, const SectorBasis& basis) {
  if (basis.n_up() != basis.n_down())
    throw InputError("spin-reflection matrices need an (N, N) sector, got (" +
                     std::to_string(basis.n_up()) + ", " + std::to_string(basis.n_down()) + ")");
  if (static_cast<std::size_t>(v.size()) != basis.size())
    throw InputError("vector length does not match the sector dimension");
  const auto d = static_cast<Eigen::Index>(basis.up_masks().size());
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) m(x, y) = v(x * d + y);
  return m;
}

double hermiticity(const ComplexMatrix& a) { return (a - a.adjoint()).cwiseAbs().maxCoeff(); }

PsiMatrix gauge_fixed(Eigen::MatrixXd m, const SectorBasis& basis, int degeneracy) {
  PsiMatrix psi;
  psi.n_sites = basis.n_sites();
  psi.n_per_spin = basis.n_up();
  psi.ground_degeneracy = degeneracy;
  const double sym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double anti = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (std::min(sym, anti) > 1e-9) {
    // Not a spin-reflection eigenvector: keep its dominant (anti)symmetric part.
    const Eigen::MatrixXd s = 0.5 * (m + m.transpose());
    const Eigen::MatrixXd a = 0.5 * (m - m.transpose());
    m = s.norm() >= a.norm() ? s : a;
  }
  m /= m.norm();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() <= (m + m.transpose()).cwiseAbs().maxCoeff()) {
    psi.phase = {1.0, 0.0};
  } else {
    psi.phase = {0.0, 1.0};
  }
  psi.values = std::move(m);
  psi.hermiticity_residual = hermiticity(psi.self_adjoint());
  return psi;
}

double min_eigenvalue(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

Eigen::VectorXd PsiMatrix::flatten() const {
  const Eigen::Index d = values.rows();
  Eigen::VectorXd v(d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) v(x * d + y) = values(x, y);
  return v;
}

PsiMatrix reshape_to_matrix(const Eigen::VectorXd& vector, const SectorBasis& basis) {
  return gauge_fixed(reshape_raw(vector, basis), basis, 1);
}

PsiMatrix reshape_ground_space(const Eigen::MatrixXd& ground_vectors, const SectorBasis& basis) {
  const auto k = ground_vectors.cols();
  if (k == 0) throw InputError("empty ground space");
  if (k == 1) return reshape_to_matrix(ground_vectors.col(0), basis);

  std::vector<Eigen::MatrixXd> reshaped;
  for (Eigen::Index a = 0; a < k; ++a) reshaped.push_back(reshape_raw(ground_vectors.col(a), basis));
  // Spin reflection Ψ -> Ψ^T restricted to the ground space.
  Eigen::MatrixXd reflection(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      reflection(a, b) = reshaped[static_cast<std::size_t>(a)]
                             .cwiseProduct(reshaped[static_cast<std::size_t>(b)].transpose())
                             .sum();
  reflection = 0.5 * (reflection + reflection.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reflection);

  auto combine = [&](Eigen::Index col) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(reshaped.front().rows(), reshaped.front().cols());
    for (Eigen::Index a = 0; a < k; ++a) m += es.eigenvectors()(a, col) * reshaped[static_cast<std::size_t>(a)];
    return m;
  };

  std::vector<Eigen::MatrixXd> symmetric;
  for (Eigen::Index col = k - 1; col >= 0; --col)
    if (es.eigenvalues()(col) > 0.5) {
      Eigen::MatrixXd m = combine(col);
      m = 0.5 * (m + m.transpose());
      symmetric.push_back(m / m.norm());
    }

  PsiMatrix psi = gauge_fixed(combine(k - 1), basis, static_cast<int>(k));
  psi.symmetric_ground_space = std::move(symmetric);
  return psi;
}

EnergyFunctional::EnergyFunctional(const LatticeSpec& spec, int n_per_spin)
    : interactions_(spec.interactions()),
      attractive_(std::all_of(interactions_.begin(), interactions_.end(), [](double u) { return u <= 0.0; })),
      sector_basis_(spec.n_sites(), Sector{n_per_spin, n_per_spin}) {
  const SectorBasis single(spec.n_sites(), Sector{n_per_spin, 0});
  kinetic_ = build_kinetic(spec, single).dense();
  for (int x = 0; x < spec.n_sites(); ++x)
    charges_.push_back(build_charge(x, single).dense().diagonal());
  hamiltonian_ = build_hubbard(spec, sector_basis_).matrix;
}

double EnergyFunctional::trace_form(const Eigen::MatrixXcd& psi) const {
  const ComplexMatrix k = kinetic_.cast<std::complex<double>>();
  std::complex<double> numerator = (psi.adjoint() * k * psi).trace() + (psi * k * psi.adjoint()).trace();
  const Eigen::MatrixXd weight = psi.cwiseAbs2();
  for (std::size_t x = 0; x < charges_.size(); ++x) {
    const double u = attractive_ ? -std::abs(interactions_[x]) : interactions_[x];
    if (u == 0.0) continue;
    // Tr(Ψ† L Ψ L) = Σ_XY |Ψ(X,Y)|² L(X) L(Y) for diagonal L.
    numerator += u * charges_[x].dot(weight * charges_[x]);
  }
  return numerator.real() / psi.squaredNorm();
}

double EnergyFunctional::quadratic_form(const Eigen::MatrixXcd& psi) const {
  const Eigen::Index d = psi.rows();
  Eigen::VectorXd re(d * d);
  Eigen::VectorXd im(d * d);
  for (Eigen::Index x = 0; x < d; ++x)
    for (Eigen::Index y = 0; y < d; ++y) {
      re(x * d + y) = psi(x, y).real();
      im(x * d + y) = psi(x, y).imag();
    }
  const double num = re.dot(hamiltonian_ * re) + im.dot(hamiltonian_ * im);
  return num / (re.squaredNorm() + im.squaredNorm());
}

EnergyEvaluation EnergyFunctional::evaluate(const Eigen::MatrixXcd& psi) const {
  if (psi.rows() != kinetic_.rows() || psi.cols() != kinetic_.cols())
    throw InputError("wavefunction matrix has the wrong dimension");
  EnergyEvaluation e;
  e.trace_form = trace_form(psi);
  e.quadratic_form = quadratic_form(psi);
  e.attractive_form = attractive_;
  if (std::abs(e.trace_form - e.quadratic_form) > 1e-9 * (1.0 + std::abs(e.quadratic_form)))
    throw std::logic_error("energy cross-check failed: trace form " + std::to_string(e.trace_form) +
                           " vs quadratic form " + std::to_string(e.quadratic_form));
  e.energy = attractive_ ? e.trace_form : e.quadratic_form;
  return e;
}

Eigen::MatrixXcd matrix_abs(const Eigen::MatrixXcd& psi) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (psi + psi.adjoint()));
  const ComplexMatrix& phi = es.eigenvectors();
  const Eigen::VectorXd w = es.eigenvalues().cwiseAbs();
  return phi * w.cast<std::complex<double>>().asDiagonal() * phi.adjoint();
}

WitnessReport positivity_witness(const PsiMatrix& psi, const EnergyFunctional& energy, double e0) {
  WitnessReport r;
  r.e0 = e0;
  r.ground_degeneracy = psi.ground_degeneracy;

  ComplexMatrix a = psi.self_adjoint();
  if (a.trace().real() < 0.0) a = -a;
  r.psd_min_eig = min_eigenvalue(ComplexMatrix(0.5 * (a + a.adjoint())));
  r.psi_was_psd = r.psd_min_eig >= -1e-10;

  const ComplexMatrix abs_psi = matrix_abs(a);
  r.e_abs_psi = energy.evaluate(abs_psi).energy;
  r.trace_abs = abs_psi.trace().real();
  r.max_diag = abs_psi.diagonal().real().maxCoeff();

  r.energy_ok = std::abs(r.e_abs_psi - e0) <= 1e-8;
  r.trace_ok = r.trace_abs > 0.0;
  r.diagonal_ok = r.max_diag > 1e-10;

  if (psi.ground_degeneracy > 1) {
    const auto& space = psi.symmetric_ground_space;
    if (space.size() == 1) {
      Eigen::MatrixXd s = space.front();
      if (s.trace() < 0.0) s = -s;
      r.psd_representative = min_eigenvalue(s) >= -1e-10;
    } else if (space.size() == 2) {
      // Maximise the smallest eigenvalue of cos θ S0 + sin θ S1 over θ.
      auto score = [&](double theta) {
        return min_eigenvalue(Eigen::MatrixXd(std::cos(theta) * space[0] + std::sin(theta) * space[1]));
      };
      const int steps = 720;
      const double h = 2.0 * std::numbers::pi / steps;
      double best_theta = 0.0;
      double best = score(0.0);
      for (int i = 1; i < steps; ++i) {
        const double v = score(i * h);
        if (v > best) {
          best = v;
          best_theta = i * h;
        }
      }
      // Golden-section refinement around the coarse optimum.
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = best_theta - h;
      double hi = best_theta + h;
      for (int it = 0; it < 60; ++it) {
        const double c = hi - g * (hi - lo);
        const double d = lo + g * (hi - lo);
        if (score(c) > score(d)) {
          hi = d;
        } else {
          lo = c;
        }
      }
      best = std::max(best, score(0.5 * (lo + hi)));
      r.psd_representative = best >= -1e-10;
    }
  }
  return r;
}

SrpAnalysis analyze_srp(const LatticeSpec& spec, int n_per_spin, const SpectrumOptions& options) {
  const SectorBasis basis(spec.n_sites(), Sector{n_per_spin, n_per_spin});
  const OperatorMatrix h = build_hubbard(spec, basis);
  const EigenSystem eig = diagonalize(h, options);
  const auto clusters = degeneracy_clusters(eig.values, options.degeneracy_tol);
  const auto [begin, end] = clusters.front();

  SrpAnalysis out;
  out.e0 = eig.values(0);
  out.psi = reshape_ground_space(eig.vectors.middleCols(begin, end - begin), basis);
  const EnergyFunctional energy(spec, n_per_spin);
  out.witness = positivity_witness(out.psi, energy, out.e0);
  return out;
}

}  // namespace towers
