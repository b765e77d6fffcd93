#include "towers/operators.hpp"

#include "towers/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace towers {

namespace {

using Triplet = Eigen::Triplet<double>;

bool valid_sector(int n_sites, Sector s) {
  return s.n_up >= 0 && s.n_up <= n_sites && s.n_down >= 0 && s.n_down <= n_sites;
}

std::size_t sector_size(int n_sites, Sector s) {
  if (!valid_sector(n_sites, s)) return 0;
  return static_cast<std::size_t>(binomial(n_sites, s.n_up) * binomial(n_sites, s.n_down));
}

void check_basis(const LatticeSpec& spec, const SectorBasis& basis) {
  if (spec.n_sites() != basis.n_sites())
    throw InputError("dimension mismatch: lattice has " + std::to_string(spec.n_sites()) +
                     " sites, basis has " + std::to_string(basis.n_sites()));
}

// Assembles an operator column by column. `terms(state, emit)` calls
// emit(target_state, amplitude) for every nonzero output.
template <typename Terms>
OperatorMatrix assemble(int n_sites, Sector source, Sector target, bool symmetric, Terms&& terms) {
  OperatorMatrix op;
  op.n_sites = n_sites;
  op.source = source;
  op.target = target;
  op.symmetric = symmetric;
  const SectorBasis src(n_sites, source);
  const std::size_t rows = sector_size(n_sites, target);
  op.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(src.size()));
  if (rows == 0) return op;
  const SectorBasis tgt(n_sites, target);
  std::vector<Triplet> triplets;
  for (std::size_t col = 0; col < src.size(); ++col) {
    const FockState s = src.state(col);
    terms(s, [&](const FockState& out, double amplitude) {
      triplets.emplace_back(static_cast<Eigen::Index>(tgt.index(out)),
                            static_cast<Eigen::Index>(col), amplitude);
    });
  }
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.prune(0.0);
  op.matrix.makeCompressed();
  return op;
}

template <typename Emit>
void emit_hopping(const LatticeSpec& spec, const FockState& s, Emit&& emit) {
  const int n = spec.n_sites();
  for (Spin spin : {Spin::Up, Spin::Down})
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const double t = spec.hopping(x, y);
        if (t == 0.0) continue;
        if (auto r = apply_hop(s, n, x, y, spin)) emit(r->state, t * r->sign);
      }
}

template <typename Emit>
void emit_interaction(const LatticeSpec& spec, const FockState& s, Emit&& emit) {
  double diag = 0.0;
  for (int x = 0; x < spec.n_sites(); ++x)
    if (((s.up & s.down) >> x) & 1u) diag += spec.interaction(x);
  if (diag != 0.0) emit(s, diag);
}

OperatorMatrix diagonal(int n_sites, Sector sector, double value) {
  return assemble(n_sites, sector, sector, true,
                  [&](const FockState& s, auto&& emit) { emit(s, value); });
}

OperatorMatrix product_plus_diag(const OperatorMatrix& lower, const OperatorMatrix& raise,
                                 double z) {
  OperatorMatrix out;
  out.n_sites = raise.n_sites;
  out.source = raise.source;
  out.target = raise.source;
  out.symmetric = true;
  const auto dim = raise.cols();
  if (raise.rows() > 0) {
    out.matrix = lower.matrix * raise.matrix;
  } else {
    out.matrix.resize(dim, dim);
  }
  SparseMatrix id(dim, dim);
  id.setIdentity();
  out.matrix += (z * z + z) * id;
  out.matrix.prune(0.0);
  out.matrix.makeCompressed();
  return out;
}

}  // namespace

std::string OperatorMatrix::to_coordinate_text() const {
  std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> entries;
  for (Eigen::Index k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
      entries.emplace_back(it.row(), it.col(), it.value());
  std::sort(entries.begin(), entries.end());
  std::ostringstream out;
  char buf[64];
  for (const auto& [r, c, v] : entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << r + 1 << ' ' << c + 1 << ' ' << buf << '\n';
  }
  return out.str();
}

OperatorMatrix build_hubbard(const LatticeSpec& spec, const SectorBasis& basis) {
  check_basis(spec, basis);
  return assemble(spec.n_sites(), basis.sector(), basis.sector(), true,
                  [&](const FockState& s, auto&& emit) {
                    emit_hopping(spec, s, emit);
                    emit_interaction(spec, s, emit);
                  });
}

OperatorMatrix build_kinetic(const LatticeSpec& spec, const SectorBasis& basis) {
  check_basis(spec, basis);
  return assemble(spec.n_sites(), basis.sector(), basis.sector(), true,
                  [&](const FockState& s, auto&& emit) { emit_hopping(spec, s, emit); });
}

OperatorMatrix build_interaction(const LatticeSpec& spec, const SectorBasis& basis) {
  check_basis(spec, basis);
  return assemble(spec.n_sites(), basis.sector(), basis.sector(), true,
                  [&](const FockState& s, auto&& emit) { emit_interaction(spec, s, emit); });
}

OperatorMatrix build_charge(int site, const SectorBasis& basis) {
  if (site < 0 || site >= basis.n_sites())
    throw InputError("site " + std::to_string(site + 1) + " out of range");
  return assemble(basis.n_sites(), basis.sector(), basis.sector(), true,
                  [&](const FockState& s, auto&& emit) {
                    const double n = static_cast<double>(((s.up >> site) & 1u) + ((s.down >> site) & 1u));
                    if (n != 0.0) emit(s, n);
                  });
}

OperatorMatrix build_spin_raise(int n_sites, Sector sector) {
  const Sector target{sector.n_up + 1, sector.n_down - 1};
  return assemble(n_sites, sector, target, false, [&](const FockState& s, auto&& emit) {
    for (int x = 0; x < n_sites; ++x) {
      auto a = apply_annihilate(s, n_sites, x, Spin::Down);
      if (!a) continue;
      auto b = apply_create(a->state, n_sites, x, Spin::Up);
      if (!b) continue;
      emit(b->state, a->sign * b->sign);
    }
  });
}

OperatorMatrix build_spin_lower(int n_sites, Sector sector) {
  const Sector target{sector.n_up - 1, sector.n_down + 1};
  return assemble(n_sites, sector, target, false, [&](const FockState& s, auto&& emit) {
    for (int x = 0; x < n_sites; ++x) {
      auto a = apply_annihilate(s, n_sites, x, Spin::Up);
      if (!a) continue;
      auto b = apply_create(a->state, n_sites, x, Spin::Down);
      if (!b) continue;
      emit(b->state, a->sign * b->sign);
    }
  });
}

SpinOperators build_spin_ops(int n_sites, Sector sector) {
  const double m = 0.5 * (sector.n_up - sector.n_down);
  SpinOperators ops;
  ops.s_z = diagonal(n_sites, sector, m);
  ops.s_plus = build_spin_raise(n_sites, sector);
  ops.s_minus = build_spin_lower(n_sites, sector);
  const Sector up{sector.n_up + 1, sector.n_down - 1};
  if (valid_sector(n_sites, up)) {
    ops.s_squared = product_plus_diag(build_spin_lower(n_sites, up), ops.s_plus, m);
  } else {
    ops.s_squared = product_plus_diag(OperatorMatrix{}, ops.s_plus, m);
  }
  return ops;
}

OperatorMatrix build_pair_raise(const std::vector<int>& parity, Sector sector) {
  const int n_sites = static_cast<int>(parity.size());
  const Sector target{sector.n_up + 1, sector.n_down + 1};
  return assemble(n_sites, sector, target, false, [&](const FockState& s, auto&& emit) {
    for (int x = 0; x < n_sites; ++x) {
      auto a = apply_create(s, n_sites, x, Spin::Down);
      if (!a) continue;
      auto b = apply_create(a->state, n_sites, x, Spin::Up);
      if (!b) continue;
      const int phase = parity[static_cast<std::size_t>(x)] ? -1 : 1;
      emit(b->state, phase * a->sign * b->sign);
    }
  });
}

OperatorMatrix build_pair_lower(const std::vector<int>& parity, Sector sector) {
  const int n_sites = static_cast<int>(parity.size());
  const Sector target{sector.n_up - 1, sector.n_down - 1};
  return assemble(n_sites, sector, target, false, [&](const FockState& s, auto&& emit) {
    for (int x = 0; x < n_sites; ++x) {
      auto a = apply_annihilate(s, n_sites, x, Spin::Up);
      if (!a) continue;
      auto b = apply_annihilate(a->state, n_sites, x, Spin::Down);
      if (!b) continue;
      const int phase = parity[static_cast<std::size_t>(x)] ? -1 : 1;
      emit(b->state, phase * a->sign * b->sign);
    }
  });
}

PseudospinOperators build_pseudospin_ops(const LatticeSpec& spec, Sector sector) {
  const auto parity = resolve_bipartition(spec);
  if (!parity) throw InputError("pseudospin operators need a bipartite lattice");
  const int n = spec.n_sites();
  const double mj = 0.5 * (sector.n_up + sector.n_down - n);
  PseudospinOperators ops;
  ops.j_z = diagonal(n, sector, mj);
  ops.j_plus = build_pair_raise(*parity, sector);
  ops.j_minus = build_pair_lower(*parity, sector);
  const Sector up{sector.n_up + 1, sector.n_down + 1};
  if (valid_sector(n, up)) {
    ops.j_squared = product_plus_diag(build_pair_lower(*parity, up), ops.j_plus, mj);
  } else {
    ops.j_squared = product_plus_diag(OperatorMatrix{}, ops.j_plus, mj);
  }
  return ops;
}

OperatorMatrix build_projector(const std::vector<int>& sites, const SectorBasis& basis) {
  if (basis.n_down() != 0) throw InputError("projectors act on a single-spin (N, 0) basis");
  if (static_cast<int>(sites.size()) != basis.n_up())
    throw InputError("projector needs " + std::to_string(basis.n_up()) + " sites, got " +
                     std::to_string(sites.size()));
  Mask target = 0;
  for (int x : sites) {
    if (x < 0 || x >= basis.n_sites()) throw InputError("projector site out of range");
    const Mask bit = Mask{1} << x;
    if (target & bit) throw InputError("repeated site " + std::to_string(x + 1) + " in projector");
    target |= bit;
  }
  return assemble(basis.n_sites(), basis.sector(), basis.sector(), true,
                  [&](const FockState& s, auto&& emit) {
                    if (s.up == target) emit(s, 1.0);
                  });
}

double max_abs(const SparseMatrix& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

double one_norm(const SparseMatrix& m) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    r = std::max(r, col);
  }
  return r;
}

CommutatorCheck intertwining_residual(const SparseMatrix& lhs, const SparseMatrix& x,
                                      const SparseMatrix& rhs, double scale) {
  CommutatorCheck check;
  if (x.rows() == 0 || x.cols() == 0) {
    check.norm = 1.0;
    return check;
  }
  const SparseMatrix left = lhs * x;
  const SparseMatrix right = x * rhs;
  SparseMatrix diff = left - right;
  if (scale != 0.0) diff -= scale * x;
  check.residual = max_abs(diff);
  check.norm = std::max(1.0, one_norm(left) + one_norm(right));
  return check;
}

}  // namespace towers
