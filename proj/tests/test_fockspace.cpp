#include "oracle.hpp"

#include "towers/errors.hpp"
#include "towers/fockspace.hpp"

#include <catch_amalgamated.hpp>

using namespace towers;

TEST_CASE("sector dimensions") {
  CHECK(enumerate_sector(2, 1, 1).size() == 4);
  CHECK(enumerate_sector(2, 0, 0).size() == 1);
  CHECK(enumerate_sector(4, 2, 2).size() == 36);
  std::size_t two_electrons = 0;
  for (int a = 0; a <= 2; ++a) two_electrons += enumerate_sector(2, a, 2 - a).size();
  CHECK(two_electrons == 6);
  CHECK_THROWS_AS(enumerate_sector(2, 3, 0), InputError);
  CHECK_THROWS_AS(enumerate_sector(2, -1, 0), InputError);
}

TEST_CASE("total dimension equals the sum of sector dimensions") {
  CHECK(total_dimension(2) == 16);
  CHECK(total_dimension(1) == 4);
  CHECK(total_dimension(4) == 256);
  for (int n = 1; n <= 8; ++n) {
    long long sum = 0;
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) sum += static_cast<long long>(enumerate_sector(n, a, b).size());
    CHECK(sum == total_dimension(n));
  }
  CHECK_THROWS_AS(total_dimension(31), InputError);
}

TEST_CASE("basis ordering and rank bijection") {
  for (int n = 1; n <= 6; ++n)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) {
        const SectorBasis basis(n, {a, b});
        CHECK(static_cast<long long>(basis.size()) == binomial(n, a) * binomial(n, b));
        for (std::size_t k = 0; k < basis.size(); ++k) {
          const FockState s = basis.state(k);
          CHECK(popcount(s.up) == a);
          CHECK(popcount(s.down) == b);
          CHECK(basis.index(s) == k);
          if (k > 0) CHECK(basis.state(k - 1) < s);
        }
      }
  const SectorBasis basis(3, {1, 1});
  CHECK_FALSE(basis.find({0b011, 0b001}).has_value());
  CHECK_THROWS_AS(basis.index({0b011, 0b001}), InputError);
}

TEST_CASE("apply_hop examples") {
  // c†_{1↑} c_{2↑} on up = {2} (sites 0-based 0 and 1)
  auto r = apply_hop({0b10, 0}, 2, 0, 1, Spin::Up);
  REQUIRE(r);
  CHECK(r->state == FockState{0b01, 0});
  CHECK(r->sign == 1);
  r = apply_hop({0b01, 0}, 2, 0, 0, Spin::Up);
  REQUIRE(r);
  CHECK(r->state == FockState{0b01, 0});
  CHECK(r->sign == 1);
  CHECK_FALSE(apply_hop({0, 0}, 2, 0, 1, Spin::Up));
  CHECK_FALSE(apply_hop({0b11, 0}, 2, 0, 1, Spin::Up));
  CHECK_THROWS_AS(apply_hop({0, 0}, 2, 0, 2, Spin::Up), InputError);
}

TEST_CASE("hopping there and back has sign product +1") {
  for (int n = 2; n <= 5; ++n)
    for (int a = 0; a <= n; ++a) {
      const SectorBasis basis(n, {a, n - a > 0 ? 1 : 0});
      for (const auto& s : basis.states())
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y)
            for (Spin spin : {Spin::Up, Spin::Down}) {
              const auto there = apply_hop(s, n, x, y, spin);
              if (!there) continue;
              const auto back = apply_hop(there->state, n, y, x, spin);
              REQUIRE(back);
              CHECK(back->state == s);
              CHECK(there->sign * back->sign == 1);
            }
    }
}

namespace {

// Matrix of one ladder operator on the full Fock space built from the
// library primitives, in the oracle's mode indexing.
Eigen::MatrixXd from_primitives(int n, int site, Spin spin, bool create) {
  const int dim = 1 << (2 * n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    const FockState s{static_cast<Mask>(idx & ((1 << n) - 1)), static_cast<Mask>(idx >> n)};
    const auto r = create ? apply_create(s, n, site, spin) : apply_annihilate(s, n, site, spin);
    if (!r) continue;
    m(static_cast<int>(r->state.up | (r->state.down << n)), idx) = r->sign;
  }
  return m;
}

}  // namespace

TEST_CASE("canonical anticommutation relations from the primitives") {
  for (int n = 1; n <= 3; ++n) {
    const int dim = 1 << (2 * n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
    std::vector<Eigen::MatrixXd> c;
    std::vector<Eigen::MatrixXd> cd;
    for (Spin spin : {Spin::Up, Spin::Down})
      for (int x = 0; x < n; ++x) {
        c.push_back(from_primitives(n, x, spin, false));
        cd.push_back(from_primitives(n, x, spin, true));
      }
    for (std::size_t p = 0; p < c.size(); ++p) {
      CHECK(cd[p] == c[p].transpose());
      for (std::size_t q = 0; q < c.size(); ++q) {
        const Eigen::MatrixXd acomm = c[p] * cd[q] + cd[q] * c[p];
        CHECK((acomm - (p == q ? id : Eigen::MatrixXd::Zero(dim, dim))).cwiseAbs().maxCoeff() == 0.0);
        CHECK((c[p] * c[q] + c[q] * c[p]).cwiseAbs().maxCoeff() == 0.0);
      }
    }
    // Same matrices as the Jordan-Wigner oracle.
    const oracle::FullFock fock(n);
    for (int x = 0; x < n; ++x) {
      CHECK(c[x] == fock.c[fock.up(x)]);
      CHECK(c[n + x] == fock.c[fock.down(x)]);
    }
  }
}

TEST_CASE("hops match the oracle operator products") {
  const int n = 3;
  const oracle::FullFock fock(n);
  for (Spin spin : {Spin::Up, Spin::Down})
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const int px = spin == Spin::Up ? fock.up(x) : fock.down(x);
        const int py = spin == Spin::Up ? fock.up(y) : fock.down(y);
        const Eigen::MatrixXd op = fock.c[px].transpose() * fock.c[py];
        for (int idx = 0; idx < (1 << (2 * n)); ++idx) {
          const FockState s{static_cast<Mask>(idx & 7), static_cast<Mask>(idx >> n)};
          const auto r = apply_hop(s, n, x, y, spin);
          Eigen::VectorXd col = op.col(idx);
          if (!r) {
            CHECK(col.isZero());
          } else {
            CHECK(col(fock.index(r->state)) == r->sign);
            CHECK(col.cwiseAbs().sum() == 1.0);
          }
        }
      }
}

TEST_CASE("masks and ranks") {
  const auto masks = masks_with_popcount(5, 2);
  CHECK(masks.size() == 10);
  for (std::size_t k = 0; k < masks.size(); ++k) CHECK(mask_rank(masks[k]) == k);
  CHECK(masks_with_popcount(4, 0) == std::vector<Mask>{0});
  CHECK(masks_with_popcount(3, 3) == std::vector<Mask>{7});
  CHECK(binomial(6, 3) == 20);
  CHECK(binomial(6, 7) == 0);
}
