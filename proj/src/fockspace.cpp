#include "towers/fockspace.hpp"

#include "towers/errors.hpp"

#include <string>

namespace towers {

namespace {

void check_site(int n_sites, int site) {
  if (site < 0 || site >= n_sites)
    throw InputError("site " + std::to_string(site + 1) + " out of range 1.." +
                     std::to_string(n_sites));
}

// Parity of occupied orbitals strictly before (site, spin) in the global order.
int sign_before(const FockState& s, int site, Spin spin) {
  const Mask below = (Mask{1} << site) - 1;
  int count = 0;
  if (spin == Spin::Up) {
    count = popcount(s.up & below);
  } else {
    count = popcount(s.up) + popcount(s.down & below);
  }
  return (count & 1) ? -1 : 1;
}

Mask& species(FockState& s, Spin spin) { return spin == Spin::Up ? s.up : s.down; }

}  // namespace

std::optional<SignedState> apply_annihilate(const FockState& s, int n_sites, int site, Spin spin) {
  check_site(n_sites, site);
  FockState out = s;
  Mask& m = species(out, spin);
  const Mask bit = Mask{1} << site;
  if (!(m & bit)) return std::nullopt;
  const int sign = sign_before(s, site, spin);
  m &= ~bit;
  return SignedState{out, sign};
}

std::optional<SignedState> apply_create(const FockState& s, int n_sites, int site, Spin spin) {
  check_site(n_sites, site);
  FockState out = s;
  Mask& m = species(out, spin);
  const Mask bit = Mask{1} << site;
  if (m & bit) return std::nullopt;
  const int sign = sign_before(s, site, spin);
  m |= bit;
  return SignedState{out, sign};
}

std::optional<SignedState> apply_hop(const FockState& s, int n_sites, int x, int y, Spin spin) {
  check_site(n_sites, x);
  check_site(n_sites, y);
  auto after = apply_annihilate(s, n_sites, y, spin);
  if (!after) return std::nullopt;
  auto result = apply_create(after->state, n_sites, x, spin);
  if (!result) return std::nullopt;
  result->sign *= after->sign;
  return result;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long total_dimension(int n_sites) {
  if (n_sites < 0 || n_sites > 30)
    throw InputError("total_dimension: n_sites must be in 0..30");
  return 1LL << (2 * n_sites);
}

std::vector<Mask> masks_with_popcount(int n_sites, int count) {
  std::vector<Mask> out;
  if (count < 0 || count > n_sites) return out;
  out.reserve(static_cast<std::size_t>(binomial(n_sites, count)));
  if (count == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack walks fixed-popcount masks in ascending order.
  Mask m = (Mask{1} << count) - 1;
  const Mask limit = Mask{1} << n_sites;
  while (m < limit) {
    out.push_back(m);
    const Mask c = m & (~m + 1);
    const Mask r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

std::size_t mask_rank(Mask m) {
  std::size_t rank = 0;
  int i = 0;
  for (int p = 0; m; ++p) {
    if (m & 1u) {
      ++i;
      rank += static_cast<std::size_t>(binomial(p, i));
    }
    m >>= 1;
  }
  return rank;
}

SectorBasis::SectorBasis(int n_sites, Sector sector) : n_sites_(n_sites), sector_(sector) {
  if (n_sites < 1 || n_sites > 16) throw InputError("n_sites must be in 1..16");
  if (sector.n_up < 0 || sector.n_up > n_sites || sector.n_down < 0 || sector.n_down > n_sites)
    throw InputError("occupation (" + std::to_string(sector.n_up) + ", " +
                     std::to_string(sector.n_down) + ") exceeds site count " +
                     std::to_string(n_sites));
  up_masks_ = masks_with_popcount(n_sites, sector.n_up);
  down_masks_ = masks_with_popcount(n_sites, sector.n_down);
}

std::optional<std::size_t> SectorBasis::find(const FockState& s) const {
  const Mask limit = (Mask{1} << n_sites_) - 1;
  if ((s.up & ~limit) || (s.down & ~limit)) return std::nullopt;
  if (popcount(s.up) != sector_.n_up || popcount(s.down) != sector_.n_down) return std::nullopt;
  return mask_rank(s.up) * down_masks_.size() + mask_rank(s.down);
}

std::size_t SectorBasis::index(const FockState& s) const {
  auto k = find(s);
  if (!k) throw InputError("state does not belong to this sector");
  return *k;
}

std::vector<FockState> SectorBasis::states() const {
  std::vector<FockState> out;
  out.reserve(size());
  for (Mask u : up_masks_)
    for (Mask d : down_masks_) out.push_back({u, d});
  return out;
}

SectorBasis enumerate_sector(int n_sites, int n_up, int n_down) {
  return SectorBasis(n_sites, {n_up, n_down});
}

}  // namespace towers
