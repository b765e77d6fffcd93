#include "towers/pph.hpp"

#include "towers/errors.hpp"

#include <algorithm>
#include <cmath>

namespace towers {

namespace {

std::vector<double> negated(const std::vector<double>& u) {
  std::vector<double> out(u.size());
  std::transform(u.begin(), u.end(), out.begin(), [](double v) { return -v; });
  return out;
}

HalfInt flip(HalfInt h) { return HalfInt{-h.twice}; }

double eigen_residual(const SparseMatrix& op, const Eigen::VectorXd& v, double lambda) {
  return (op * v - lambda * v).norm();
}

}  // namespace

SparseMatrix PphMap::matrix() const {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(dimension());
  for (std::size_t k = 0; k < dimension(); ++k)
    entries.emplace_back(static_cast<int>(target_index[k]), static_cast<int>(k), sign[k]);
  SparseMatrix p(static_cast<Eigen::Index>(dimension()), static_cast<Eigen::Index>(dimension()));
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

Eigen::VectorXd PphMap::apply(const Eigen::VectorXd& source_vector) const {
  if (static_cast<std::size_t>(source_vector.size()) != dimension())
    throw InputError("vector length does not match the source sector");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(source_vector.size());
  for (std::size_t k = 0; k < dimension(); ++k)
    out(static_cast<Eigen::Index>(target_index[k])) = sign[k] * source_vector(static_cast<Eigen::Index>(k));
  return out;
}

PphMap build_pph(const LatticeSpec& spec, Sector sector) {
  const int n = spec.n_sites();
  const auto parity = resolve_bipartition(spec);
  if (!parity) throw InputError("particle-hole map needs a bipartite lattice");
  if (!spec.uniform_interaction()) throw InputError("particle-hole map needs a uniform U");
  if (sector.n_up < 0 || sector.n_down < 0 || sector.n_up > n || sector.n_down > n)
    throw InputError("sector out of range");

  const Sector target{n - sector.n_up, sector.n_down};
  const SectorBasis source_basis(n, sector);
  const SectorBasis target_basis(n, target);
  const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;

  PphMap map{spec, sector, spec.with_interactions(negated(spec.interactions())), target,
             spec.interaction(0) * sector.n_down, {}, {}};
  map.target_index.resize(source_basis.size());
  map.sign.resize(source_basis.size());
  for (std::size_t k = 0; k < source_basis.size(); ++k) {
    const FockState s = source_basis.state(k);
    int exponent = n * popcount(s.down);
    for (int a = 0; a < n; ++a)
      if (s.up >> a & 1u) exponent += (*parity)[static_cast<std::size_t>(a)] + a;
    map.target_index[k] = target_basis.index(FockState{full & ~s.up, s.down});
    map.sign[k] = exponent % 2 == 0 ? 1 : -1;
  }
  return map;
}

CorrespondenceReport verify_spectral_correspondence(const PphMap& map, const SpectrumOptions& options) {
  const int n = map.n_sites();
  const OperatorMatrix h_source = build_hubbard(map.source_spec, SectorBasis(n, map.source));
  const OperatorMatrix h_target = build_hubbard(map.target_spec, SectorBasis(n, map.target));
  const SparseMatrix p = map.matrix();

  CorrespondenceReport report;
  SparseMatrix identity(h_target.rows(), h_target.cols());
  identity.setIdentity();
  const SparseMatrix diff = SparseMatrix(p * h_source.matrix * SparseMatrix(p.transpose())) -
                            h_target.matrix - map.energy_shift * identity;
  report.operator_deviation = diff.nonZeros() ? max_abs(diff) : 0.0;

  SpectrumOptions full = options;
  full.dense_cap = std::max<std::size_t>(options.dense_cap, static_cast<std::size_t>(h_source.rows()));
  const EigenSystem es = diagonalize(h_source, full);
  const EigenSystem et = diagonalize(h_target, full);
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    LevelMatch m;
    m.source_energy = es.values(k);
    m.target_energy = et.values(k) + map.energy_shift;
    m.deviation = std::abs(m.source_energy - m.target_energy);
    if (m.deviation >= 1e-9 && !report.first_mismatch) report.first_mismatch = static_cast<int>(k);
    report.spectral_deviation = std::max(report.spectral_deviation, m.deviation);
    report.levels.push_back(m);
  }
  return report;
}

LabelSwapReport verify_label_swap(const PphMap& map, const LabeledSpectrum& source,
                                  const LabeledSpectrum& target, double tol) {
  if (source.sector != map.source || target.sector != map.target)
    throw InputError("labeled spectra do not belong to the mapped sectors");
  const int n = map.n_sites();
  const SparseMatrix s2 = build_spin_ops(n, map.target).s_squared.matrix;
  const SparseMatrix j2 = build_pseudospin_ops(map.target_spec, map.target).j_squared.matrix;

  LabelSwapReport report;
  for (std::size_t k = 0; k < source.records.size(); ++k) {
    const SpectrumRecord& rs = source.records[k];
    if (!rs.j) throw LabelingError("source spectrum carries no pseudospin labels");
    const Eigen::VectorXd w = map.apply(source.vectors.col(static_cast<Eigen::Index>(k)));

    LabelSwapMatch m;
    m.source_level = static_cast<int>(k);
    m.energy = rs.energy;
    m.s_source = rs.s;
    m.j_source = *rs.j;
    m.m_source = rs.m;
    m.m_j_source = rs.m_j;
    m.casimir_residual = std::max(eigen_residual(s2, w, rs.j->casimir()), eigen_residual(j2, w, rs.s.casimir()));

    const Eigen::VectorXd overlaps = (target.vectors.transpose() * w).cwiseAbs();
    Eigen::Index best = 0;
    m.overlap = overlaps.size() ? overlaps.maxCoeff(&best) : 0.0;
    m.target_level = static_cast<int>(best);
    bool ok = overlaps.size() > 0 && m.casimir_residual <= tol;
    if (ok) {
      const SpectrumRecord& rt = target.records[static_cast<std::size_t>(best)];
      if (!rt.j) throw LabelingError("target spectrum carries no pseudospin labels");
      m.s_target = rt.s;
      m.j_target = *rt.j;
      m.m_target = rt.m;
      m.m_j_target = rt.m_j;
      ok = m.s_target == m.j_source && m.j_target == m.s_source && m.m_target == flip(m.m_j_source) &&
           m.m_j_target == flip(m.m_source) &&
           std::abs(rt.energy + map.energy_shift - rs.energy) <= 1e-9 * (1.0 + std::abs(rs.energy));
    }
    m.ok = ok;
    report.max_casimir_residual = std::max(report.max_casimir_residual, m.casimir_residual);
    if (!ok) ++report.mismatches;
    report.levels.push_back(m);
  }
  return report;
}

}  // namespace towers
