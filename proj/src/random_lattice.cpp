#include "towers/random_lattice.hpp"

#include "towers/errors.hpp"

#include <algorithm>
#include <numeric>

namespace towers {

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

LatticeSpec random_connected_lattice(std::mt19937_64& rng, const RandomLatticeOptions& o) {
  if (o.min_sites < 1 || o.max_sites < o.min_sites) throw InputError("bad site range");
  if (o.t_min <= 0.0 || o.t_max < o.t_min) throw InputError("bad hopping range");
  if (o.u_max < o.u_min) throw InputError("bad interaction range");

  std::uniform_int_distribution<int> size_dist(o.min_sites, o.max_sites);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> magnitude(o.t_min, o.t_max);
  std::uniform_real_distribution<double> interaction(o.u_min, o.u_max);
  auto hop = [&] { return (unit(rng) < 0.5 ? -1.0 : 1.0) * magnitude(rng); };

  const int n = size_dist(rng);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    const int a = order[static_cast<std::size_t>(i)];
    const int b = order[static_cast<std::size_t>(parent(rng))];
    t(a, b) = t(b, a) = hop();
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (t(x, y) == 0.0 && unit(rng) < o.extra_bond_probability) t(x, y) = t(y, x) = hop();
  for (int x = 0; x < n; ++x)
    if (unit(rng) < o.diagonal_probability) t(x, x) = hop();

  std::vector<double> u(static_cast<std::size_t>(n));
  if (o.uniform_u) {
    std::fill(u.begin(), u.end(), interaction(rng));
  } else {
    for (double& v : u) v = interaction(rng);
  }
  return LatticeSpec(t, u);
}

LatticeSpec random_case(std::uint64_t seed, std::uint64_t index, const RandomLatticeOptions& options) {
  auto rng = case_rng(seed, index);
  return random_connected_lattice(rng, options);
}

}  // namespace towers
