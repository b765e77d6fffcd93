#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace towers {

using Mask = std::uint32_t;

enum class Spin { Up, Down };

struct Sector {
  int n_up = 0;
  int n_down = 0;

  int n_electrons() const { return n_up + n_down; }
  friend bool operator==(const Sector&, const Sector&) = default;
  friend auto operator<=>(const Sector&, const Sector&) = default;
};

// Occupation of the 2|Λ| spin orbitals.
struct FockState {
  Mask up = 0;
  Mask down = 0;

  friend bool operator==(const FockState&, const FockState&) = default;
  friend auto operator<=>(const FockState&, const FockState&) = default;
};

// A basis state together with the fermionic sign picked up on the way.
struct SignedState {
  FockState state;
  int sign = 1;
};

/*
 * Fermionic ordering convention. A state is
 *
 *   c†_{x1↑} ... c†_{xa↑} c†_{y1↓} ... c†_{yb↓} |0>,   x1 < ... < xa, y1 < ... < yb,
 *
 * i.e. orbital (x, ↑) has position x and (y, ↓) has position |Λ| + y. An
 * operator on position p picks up (-1)^(occupied positions < p).
 */
std::optional<SignedState> apply_annihilate(const FockState& s, int n_sites, int site, Spin spin);
std::optional<SignedState> apply_create(const FockState& s, int n_sites, int site, Spin spin);

// c†_{xσ} c_{yσ}. Returns nullopt when the result vanishes.
std::optional<SignedState> apply_hop(const FockState& s, int n_sites, int x, int y, Spin spin);

// All masks over n_sites bits with the given popcount, ascending.
std::vector<Mask> masks_with_popcount(int n_sites, int count);

long long binomial(int n, int k);

// 4^n_sites, the dimension of the full Fock space. Throws for n_sites > 30.
long long total_dimension(int n_sites);

/**
 * Basis of the fixed (N_↑, N_↓) sector, ordered by (up_mask, down_mask)
 * ascending. The ordinal of a state is rank(up) * dim_down + rank(down).
 */
class SectorBasis {
 public:
  SectorBasis(int n_sites, Sector sector);

  int n_sites() const { return n_sites_; }
  Sector sector() const { return sector_; }
  int n_up() const { return sector_.n_up; }
  int n_down() const { return sector_.n_down; }
  std::size_t size() const { return up_masks_.size() * down_masks_.size(); }

  FockState state(std::size_t k) const {
    return {up_masks_[k / down_masks_.size()], down_masks_[k % down_masks_.size()]};
  }
  std::size_t index(const FockState& s) const;
  std::optional<std::size_t> find(const FockState& s) const;

  const std::vector<Mask>& up_masks() const { return up_masks_; }
  const std::vector<Mask>& down_masks() const { return down_masks_; }
  std::vector<FockState> states() const;

 private:
  int n_sites_;
  Sector sector_;
  std::vector<Mask> up_masks_;
  std::vector<Mask> down_masks_;
};

SectorBasis enumerate_sector(int n_sites, int n_up, int n_down);

// Combinatorial rank of a fixed-popcount mask among all masks with the same
// popcount in ascending numeric order.
std::size_t mask_rank(Mask m);

inline int popcount(Mask m) { return __builtin_popcount(m); }

}  // namespace towers
