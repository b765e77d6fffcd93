#include "towers/spectra.hpp"

#include "towers/errors.hpp"
#include "towers/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace towers {

std::string HalfInt::str() const {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

HalfInt round_casimir(double casimir_value) {
  const double q = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * casimir_value)));
  return HalfInt{static_cast<int>(std::lround(2.0 * q))};
}

namespace {

void fix_gauge(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

void check_symmetric(const SparseMatrix& h) {
  if (h.rows() != h.cols()) throw InputError("cannot diagonalize a non-square matrix");
  const SparseMatrix t = h.transpose();
  const SparseMatrix diff = h - t;
  if (max_abs(diff) > 1e-12 * std::max(1.0, max_abs(h)))
    throw InputError("cannot diagonalize a non-symmetric matrix");
}

// Lowest eigenpair of a symmetric tridiagonal matrix.
std::pair<double, Eigen::VectorXd> lowest_ritz(const std::vector<double>& alpha,
                                               const std::vector<double>& beta) {
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

}  // namespace

EigenSystem lanczos_lowest(const SparseMatrix& h, int k, double tol) {
  const Eigen::Index n = h.rows();
  k = static_cast<int>(std::min<Eigen::Index>(k, n));
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;

  Eigen::MatrixXd locked(n, 0);
  std::vector<double> locked_values;

  auto orthogonalize = [&](Eigen::VectorXd& v, const Eigen::MatrixXd& q, Eigen::Index used) {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked.cols() > 0) v -= locked * (locked.transpose() * v);
      if (used > 0) v -= q.leftCols(used) * (q.leftCols(used).transpose() * v);
    }
  };

  for (int found = 0; found < k; ++found) {
    const Eigen::Index max_steps = std::min<Eigen::Index>(n - found, 400);
    Eigen::MatrixXd q(n, max_steps);
    std::vector<double> alpha;
    std::vector<double> beta;

    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    orthogonalize(v, q, 0);
    v.normalize();

    double theta = 0.0;
    Eigen::VectorXd ritz;
    bool converged = false;
    for (Eigen::Index step = 0; step < max_steps; ++step) {
      q.col(step) = v;
      Eigen::VectorXd w = h * v;
      alpha.push_back(v.dot(w));
      orthogonalize(w, q, step + 1);
      const double b = w.norm();
      const bool exhausted = b < 1e-12 || step + 1 == max_steps;
      if (exhausted || step % 5 == 4) {
        auto [value, y] = lowest_ritz(alpha, beta);
        const double estimate = b * std::abs(y(y.size() - 1));
        if (estimate < tol * (1.0 + std::abs(value)) || exhausted) {
          theta = value;
          ritz = q.leftCols(step + 1) * y;
          converged = true;
          break;
        }
      }
      beta.push_back(b);
      v = w / b;
    }
    if (!converged) throw SolverError("Lanczos did not converge");
    ritz.normalize();
    const double residual = (h * ritz - theta * ritz).norm();
    if (residual > 1e-9 * (1.0 + std::abs(theta)))
      throw SolverError("Lanczos residual " + std::to_string(residual) + " above tolerance");
    locked.conservativeResize(n, locked.cols() + 1);
    locked.col(locked.cols() - 1) = ritz;
    locked_values.push_back(theta);
  }

  std::vector<int> order(locked_values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return locked_values[static_cast<std::size_t>(a)] < locked_values[static_cast<std::size_t>(b)]; });
  EigenSystem out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values(i) = locked_values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    out.vectors.col(i) = locked.col(order[static_cast<std::size_t>(i)]);
  }
  out.partial = k < n;
  fix_gauge(out.vectors);
  return out;
}

EigenSystem diagonalize(const OperatorMatrix& h, const SpectrumOptions& options) {
  check_symmetric(h.matrix);
  const auto n = static_cast<std::size_t>(h.rows());
  if (n > options.dense_cap) return lanczos_lowest(h.matrix, options.lowest_k);
  EigenSystem out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  fix_gauge(out.vectors);
  return out;
}

std::vector<std::pair<int, int>> degeneracy_clusters(const Eigen::VectorXd& values, double tol) {
  std::vector<std::pair<int, int>> out;
  const auto n = static_cast<int>(values.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || values(i) - values(i - 1) >= tol * (1.0 + std::abs(values(i)))) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

namespace {

struct CasimirBlock {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;
};

// Diagonalizes the Casimir restricted to span(vectors).
CasimirBlock diagonalize_within(const SparseMatrix& casimir, const Eigen::MatrixXd& vectors) {
  const Eigen::MatrixXd applied = casimir * vectors;
  Eigen::MatrixXd restricted = vectors.transpose() * applied;
  restricted = 0.5 * (restricted + restricted.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restricted);
  return {vectors * es.eigenvectors(), es.eigenvalues()};
}

double leakage(const SparseMatrix& casimir, const Eigen::VectorXd& v, double lambda) {
  return (casimir * v - lambda * v).norm();
}

}  // namespace

LabeledSpectrum resolve_quantum_numbers(const OperatorMatrix& h, const OperatorMatrix& s_squared,
                                        const OperatorMatrix* j_squared, const EigenSystem& eig,
                                        int n_sites, const SpectrumOptions& options) {
  if (!intertwining_residual(h.matrix, s_squared.matrix, h.matrix).ok())
    throw LabelingError("S^2 does not commute with H in sector (" +
                        std::to_string(h.source.n_up) + ", " + std::to_string(h.source.n_down) + ")");
  if (j_squared && !intertwining_residual(h.matrix, j_squared->matrix, h.matrix).ok())
    throw LabelingError("J^2 does not commute with H in sector (" +
                        std::to_string(h.source.n_up) + ", " + std::to_string(h.source.n_down) + ")");

  const Sector sector = h.source;
  const int n_e = sector.n_electrons();
  const HalfInt m{sector.n_up - sector.n_down};
  const HalfInt m_j{n_e - n_sites};

  LabeledSpectrum out;
  out.sector = sector;
  out.partial = eig.partial;
  out.vectors = eig.vectors;
  out.records.resize(static_cast<std::size_t>(eig.values.size()));

  const auto clusters = degeneracy_clusters(eig.values, options.degeneracy_tol);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto [begin, end] = clusters[c];
    const int width = end - begin;
    const std::string where = "cluster " + std::to_string(c) + " (E = " +
                              std::to_string(eig.values(begin)) + ") of sector (" +
                              std::to_string(sector.n_up) + ", " + std::to_string(sector.n_down) + ")";

    auto spin = diagonalize_within(s_squared.matrix, eig.vectors.middleCols(begin, width));
    std::vector<HalfInt> s_labels(static_cast<std::size_t>(width));
    std::vector<double> residuals(static_cast<std::size_t>(width), 0.0);
    for (int i = 0; i < width; ++i) {
      const double lambda = spin.eigenvalues(i);
      const HalfInt s = round_casimir(lambda);
      s_labels[static_cast<std::size_t>(i)] = s;
      residuals[static_cast<std::size_t>(i)] =
          std::max(std::abs(lambda - s.casimir()), leakage(s_squared.matrix, spin.vectors.col(i), lambda));
    }

    std::vector<std::optional<HalfInt>> j_labels(static_cast<std::size_t>(width));
    if (j_squared) {
      // Eigenvalues come out ascending, so equal-s vectors are contiguous.
      int g = 0;
      while (g < width) {
        int g_end = g + 1;
        while (g_end < width && s_labels[static_cast<std::size_t>(g_end)] == s_labels[static_cast<std::size_t>(g)]) ++g_end;
        auto pseudo = diagonalize_within(j_squared->matrix, spin.vectors.middleCols(g, g_end - g));
        spin.vectors.middleCols(g, g_end - g) = pseudo.vectors;
        for (int i = 0; i < g_end - g; ++i) {
          const double mu = pseudo.eigenvalues(i);
          const HalfInt jv = round_casimir(mu);
          const auto idx = static_cast<std::size_t>(g + i);
          j_labels[idx] = jv;
          residuals[idx] = std::max({residuals[idx], std::abs(mu - jv.casimir()),
                                     leakage(j_squared->matrix, pseudo.vectors.col(i), mu)});
        }
        g = g_end;
      }
    }

    out.vectors.middleCols(begin, width) = spin.vectors;
    for (int i = 0; i < width; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const HalfInt s = s_labels[idx];
      if (residuals[idx] > options.label_tol)
        throw LabelingError("label residual " + std::to_string(residuals[idx]) + " in " + where);
      if (s.twice < std::abs(m.twice) || s.twice > n_e || (s.twice - m.twice) % 2 != 0)
        throw LabelingError("spin " + s.str() + " not allowed in " + where);
      if (const auto& j = j_labels[idx]) {
        const int j_max = n_sites - (n_e % 2);
        if (j->twice < std::abs(m_j.twice) || j->twice > j_max || (j->twice - m_j.twice) % 2 != 0)
          throw LabelingError("pseudospin " + j->str() + " not allowed in " + where);
      }
      SpectrumRecord& r = out.records[static_cast<std::size_t>(begin + i)];
      r.energy = eig.values(begin + i);
      r.sector = sector;
      r.s = s;
      r.m = m;
      r.j = j_labels[idx];
      r.m_j = m_j;
      r.cluster = static_cast<int>(c);
      r.casimir_residual = residuals[idx];
    }
  }
  return out;
}

SectorBuilder hubbard_problem(const LatticeSpec& spec, PseudospinLabels labels) {
  bool with_j = false;
  if (labels == PseudospinLabels::Auto) with_j = pseudospin_symmetric(spec);
  if (labels == PseudospinLabels::Force) with_j = resolve_bipartition(spec).has_value();
  return [spec, with_j](Sector sector) {
    const SectorBasis basis(spec.n_sites(), sector);
    SectorProblem p{build_hubbard(spec, basis), build_spin_ops(spec.n_sites(), sector).s_squared,
                    std::nullopt};
    if (with_j) p.pseudospin_casimir = build_pseudospin_ops(spec, sector).j_squared;
    return p;
  };
}

SectorBuilder electron_phonon_problem(const LatticeSpec& lattice, const PhononSpec& phonons,
                                      std::size_t cap) {
  phonons.validate(lattice.n_sites());
  return [lattice, phonons, cap](Sector sector) {
    const SectorBasis basis(lattice.n_sites(), sector);
    SectorProblem p{build_ep_hamiltonian(lattice, phonons, basis, cap),
                    tensor_identity(build_spin_ops(lattice.n_sites(), sector).s_squared,
                                    phonons.dimension()),
                    std::nullopt};
    return p;
  };
}

LabeledSpectrum solve_sector(const SectorBuilder& builder, Sector sector, int n_sites,
                             const SpectrumOptions& options) {
  const SectorProblem p = builder(sector);
  const EigenSystem eig = diagonalize(p.hamiltonian, options);
  return resolve_quantum_numbers(p.hamiltonian, p.spin_casimir,
                                 p.pseudospin_casimir ? &*p.pseudospin_casimir : nullptr, eig,
                                 n_sites, options);
}

std::vector<LabeledSpectrum> solve_sectors(const SectorBuilder& builder,
                                           const std::vector<Sector>& sectors, int n_sites,
                                           const SpectrumOptions& options) {
  std::vector<LabeledSpectrum> out(sectors.size());
  parallel_for(sectors.size(), [&](std::size_t i) {
    out[i] = solve_sector(builder, sectors[i], n_sites, options);
  });
  return out;
}

std::vector<Sector> sectors_with_electrons(int n_sites, int n_electrons) {
  std::vector<Sector> out;
  for (int up = 0; up <= n_sites; ++up) {
    const int down = n_electrons - up;
    if (down >= 0 && down <= n_sites) out.push_back({up, down});
  }
  return out;
}

std::vector<Sector> all_sectors(int n_sites) {
  std::vector<Sector> out;
  for (int ne = 0; ne <= 2 * n_sites; ++ne)
    for (const auto& s : sectors_with_electrons(n_sites, ne)) out.push_back(s);
  return out;
}

GroundStateReport ground_state_report(const std::vector<LabeledSpectrum>& spectra, int n_electrons,
                                      const SpectrumOptions& options) {
  GroundStateReport report;
  report.n_electrons = n_electrons;
  std::vector<SpectrumRecord> records;
  for (const auto& sp : spectra)
    for (const auto& r : sp.records)
      if (r.sector.n_electrons() == n_electrons) records.push_back(r);
  if (records.empty()) return report;
  const double e0 = std::min_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
                      return a.energy < b.energy;
                    })->energy;
  for (const auto& r : records)
    if (std::abs(r.energy - e0) < options.degeneracy_tol * (1.0 + std::abs(e0)))
      report.ground_records.push_back(r);
  std::sort(report.ground_records.begin(), report.ground_records.end(),
            [](const auto& a, const auto& b) { return a.sector < b.sector; });
  report.energy = e0;
  report.degeneracy = static_cast<int>(report.ground_records.size());
  report.s = report.ground_records.front().s;
  report.j = report.ground_records.front().j;
  report.labels_consistent = std::all_of(report.ground_records.begin(), report.ground_records.end(),
                                         [&](const auto& r) { return r.s == report.s && r.j == report.j; });
  report.unique = report.labels_consistent && report.degeneracy == report.s.twice + 1;
  return report;
}

GroundStateReport ground_state_report(const SectorBuilder& builder, int n_sites, int n_electrons,
                                      const SpectrumOptions& options) {
  const auto spectra = solve_sectors(builder, sectors_with_electrons(n_sites, n_electrons), n_sites, options);
  return ground_state_report(spectra, n_electrons, options);
}

bool TowerReport::strict_from(HalfInt from) const {
  return std::none_of(violations.begin(), violations.end(),
                      [&](const auto& v) { return v.first >= from; });
}

TowerReport extract_tower(const std::vector<SpectrumRecord>& records, TowerKind kind,
                          const TowerScope& scope, double degeneracy_tol) {
  std::map<HalfInt, double> minima;
  for (const auto& r : records) {
    if (scope.kind == TowerScope::Kind::FixedSector && r.sector != scope.sector) continue;
    if (scope.kind == TowerScope::Kind::FixedElectrons && r.sector.n_electrons() != scope.n_electrons)
      continue;
    std::optional<HalfInt> value = r.s;
    if (kind == TowerKind::Pseudospin) value = r.j;
    if (!value) continue;
    auto [it, inserted] = minima.try_emplace(*value, r.energy);
    if (!inserted) it->second = std::min(it->second, r.energy);
  }
  TowerReport report;
  report.kind = kind;
  for (const auto& [v, e] : minima) report.entries.push_back({v, e});
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    const auto& lo = report.entries[i - 1];
    const auto& hi = report.entries[i];
    if (hi.value.twice - lo.value.twice != 2) continue;
    const double gap = hi.min_energy - lo.min_energy;
    report.min_gap = report.min_gap ? std::min(*report.min_gap, gap) : gap;
    if (gap <= degeneracy_tol * (1.0 + std::abs(lo.min_energy)))
      report.violations.emplace_back(lo.value, hi.value);
  }
  report.strict = report.violations.empty();
  return report;
}

std::vector<SpectrumRecord> collect_records(const std::vector<LabeledSpectrum>& spectra) {
  std::vector<SpectrumRecord> out;
  for (const auto& sp : spectra) out.insert(out.end(), sp.records.begin(), sp.records.end());
  return out;
}

}  // namespace towers
