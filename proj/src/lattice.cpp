#include "towers/lattice.hpp"

#include "towers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace towers {

namespace {

std::vector<std::vector<int>> adjacency(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && spec.hopping(x, y) != 0.0) adj[static_cast<std::size_t>(x)].push_back(y);
  return adj;
}

}  // namespace

LatticeSpec::LatticeSpec(Eigen::MatrixXd hopping, std::vector<double> interactions,
                         std::optional<std::vector<int>> bipartition)
    : hopping_(std::move(hopping)),
      interactions_(std::move(interactions)),
      bipartition_(std::move(bipartition)) {
  const auto n = static_cast<Eigen::Index>(interactions_.size());
  if (n < 1) throw InputError("lattice needs at least one site");
  if (n > 16) throw InputError("at most 16 sites are supported");
  if (hopping_.rows() != n || hopping_.cols() != n)
    throw InputError("hopping matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  if (!hopping_.allFinite()) throw InputError("non-finite hopping");
  for (double u : interactions_)
    if (!std::isfinite(u)) throw InputError("non-finite interaction");
  // Enforce exact symmetry: keep the upper triangle.
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = x + 1; y < n; ++y) {
      if (hopping_(x, y) != hopping_(y, x))
        throw InputError("hopping matrix is not symmetric at (" + std::to_string(x + 1) + ", " +
                         std::to_string(y + 1) + ")");
    }
  if (bipartition_) {
    const auto& eps = *bipartition_;
    if (static_cast<Eigen::Index>(eps.size()) != n)
      throw InputError("bipartition length does not match site count");
    for (int e : eps)
      if (e != 0 && e != 1) throw InputError("bipartition entries must be 0 or 1");
    for (Eigen::Index x = 0; x < n; ++x)
      for (Eigen::Index y = x + 1; y < n; ++y)
        if (hopping_(x, y) != 0.0 && eps[static_cast<std::size_t>(x)] == eps[static_cast<std::size_t>(y)])
          throw InputError("bond (" + std::to_string(x + 1) + ", " + std::to_string(y + 1) +
                           ") joins sites of the same sublattice");
  }
}

std::vector<Bond> LatticeSpec::bonds() const {
  std::vector<Bond> out;
  for (int x = 0; x < n_sites(); ++x)
    for (int y = x; y < n_sites(); ++y)
      if (hopping_(x, y) != 0.0) out.push_back({x, y, hopping_(x, y)});
  return out;
}

bool LatticeSpec::has_diagonal_hopping() const {
  for (int x = 0; x < n_sites(); ++x)
    if (hopping_(x, x) != 0.0) return true;
  return false;
}

bool LatticeSpec::uniform_interaction() const {
  return std::all_of(interactions_.begin(), interactions_.end(),
                     [&](double u) { return u == interactions_.front(); });
}

LatticeSpec LatticeSpec::with_interactions(std::vector<double> interactions) const {
  return LatticeSpec(hopping_, std::move(interactions), bipartition_);
}

LatticeSpec build_lattice(int n_sites, const std::vector<Bond>& bonds,
                          const std::vector<double>& interactions,
                          std::optional<std::vector<int>> bipartition) {
  if (n_sites < 1) throw InputError("lattice needs at least one site");
  if (static_cast<int>(interactions.size()) != n_sites)
    throw InputError("expected " + std::to_string(n_sites) + " interactions, got " +
                     std::to_string(interactions.size()));
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n_sites, n_sites);
  for (const auto& b : bonds) {
    if (b.x < 0 || b.x >= n_sites || b.y < 0 || b.y >= n_sites)
      throw InputError("bond site index out of range: (" + std::to_string(b.x + 1) + ", " +
                       std::to_string(b.y + 1) + ")");
    if (!std::isfinite(b.t)) throw InputError("non-finite hopping");
    t(b.x, b.y) += b.t;
    if (b.x != b.y) t(b.y, b.x) += b.t;
  }
  return LatticeSpec(std::move(t), interactions, std::move(bipartition));
}

BipartitionReport detect_bipartition(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  const auto adj = adjacency(spec);
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> depth(static_cast<std::size_t>(n), 0);

  BipartitionReport report;
  report.has_diagonal_hopping = spec.has_diagonal_hopping();

  for (int root = 0; root < n; ++root) {
    if (color[static_cast<std::size_t>(root)] != -1) continue;
    color[static_cast<std::size_t>(root)] = 0;
    std::queue<int> queue;
    queue.push(root);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        auto& cv = color[static_cast<std::size_t>(v)];
        if (cv == -1) {
          cv = 1 - color[static_cast<std::size_t>(u)];
          parent[static_cast<std::size_t>(v)] = u;
          depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
          queue.push(v);
        } else if (cv == color[static_cast<std::size_t>(u)]) {
          // Same color on both ends: walk both tree paths up to the common
          // ancestor. The resulting cycle has odd length.
          std::vector<int> left{u};
          std::vector<int> right{v};
          int a = u;
          int b = v;
          while (depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)]) {
            a = parent[static_cast<std::size_t>(a)];
            left.push_back(a);
          }
          while (depth[static_cast<std::size_t>(b)] > depth[static_cast<std::size_t>(a)]) {
            b = parent[static_cast<std::size_t>(b)];
            right.push_back(b);
          }
          while (a != b) {
            a = parent[static_cast<std::size_t>(a)];
            b = parent[static_cast<std::size_t>(b)];
            left.push_back(a);
            right.push_back(b);
          }
          right.pop_back();  // common ancestor already in `left`
          report.odd_cycle = left;
          report.odd_cycle.insert(report.odd_cycle.end(), right.rbegin(), right.rend());
          report.is_bipartite = false;
          return report;
        }
      }
    }
  }

  report.is_bipartite = true;
  report.assignment = color;
  report.size_b = static_cast<int>(std::count(color.begin(), color.end(), 1));
  report.size_a = n - report.size_b;
  return report;
}

ConnectivityReport is_connected(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  const auto adj = adjacency(spec);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  ConnectivityReport report;
  for (int root = 0; root < n; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<int> component;
    std::queue<int> queue;
    queue.push(root);
    seen[static_cast<std::size_t>(root)] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      component.push_back(u);
      for (int v : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          queue.push(v);
        }
    }
    std::sort(component.begin(), component.end());
    report.components.push_back(std::move(component));
  }
  report.connected = report.components.size() == 1;
  return report;
}

std::optional<std::vector<int>> resolve_bipartition(const LatticeSpec& spec) {
  if (spec.bipartition()) return spec.bipartition();
  auto report = detect_bipartition(spec);
  if (!report.is_bipartite) return std::nullopt;
  return report.assignment;
}

bool pseudospin_symmetric(const LatticeSpec& spec) {
  return !spec.has_diagonal_hopping() && spec.uniform_interaction() &&
         resolve_bipartition(spec).has_value();
}

LatticeSpec generate_lieb_chain(int unit_cells, double t, double u) {
  if (unit_cells < 1) throw InputError("unit_cells must be >= 1");
  const int n = 3 * unit_cells;
  std::vector<Bond> bonds;
  std::vector<int> eps(static_cast<std::size_t>(n), 1);
  for (int c = 0; c < unit_cells; ++c) {
    const int hub = 3 * c;
    eps[static_cast<std::size_t>(hub)] = 0;
    bonds.push_back({hub, hub + 1, -t});
    bonds.push_back({hub, hub + 2, -t});
    if (c + 1 < unit_cells) bonds.push_back({hub + 2, hub + 3, -t});
  }
  return build_lattice(n, bonds, std::vector<double>(static_cast<std::size_t>(n), u), eps);
}

LatticeSpec generate_chain(int n_sites, double t, double u) {
  std::vector<Bond> bonds;
  for (int x = 0; x + 1 < n_sites; ++x) bonds.push_back({x, x + 1, -t});
  return build_lattice(n_sites, bonds, std::vector<double>(static_cast<std::size_t>(n_sites), u));
}

}  // namespace towers
