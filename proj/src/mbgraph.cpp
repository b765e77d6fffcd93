#include "towers/mbgraph.hpp"

#include "towers/errors.hpp"
#include "towers/operators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <string>

namespace towers {

namespace {

std::vector<std::vector<int>> neighbours(const LatticeSpec& spec) {
  const int n = spec.n_sites();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && spec.hopping(x, y) != 0.0) adj[static_cast<std::size_t>(x)].push_back(y);
  return adj;
}

// Site path from `start` to the first site satisfying `goal`, BFS order.
template <class Goal>
std::vector<int> bfs_sites(const std::vector<std::vector<int>>& adj, int start, Goal goal) {
  std::vector<int> parent(adj.size(), -2);
  std::deque<int> queue{start};
  parent[static_cast<std::size_t>(start)] = -1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u != start && goal(u)) {
      std::vector<int> path;
      for (int v = u; v != -1; v = parent[static_cast<std::size_t>(v)]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int v : adj[static_cast<std::size_t>(u)])
      if (parent[static_cast<std::size_t>(v)] == -2) {
        parent[static_cast<std::size_t>(v)] = u;
        queue.push_back(v);
      }
  }
  return {};
}

std::string component_text(const ConnectivityReport& c) {
  std::string out;
  for (const auto& comp : c.components) {
    out += out.empty() ? "{" : ", {";
    for (std::size_t i = 0; i < comp.size(); ++i) out += (i ? "," : "") + std::to_string(comp[i] + 1);
    out += "}";
  }
  return out;
}

}  // namespace

std::vector<int> ConfigNode::sites() const {
  std::vector<int> out;
  for (int x = 0; x < 32; ++x)
    if (contains(x)) out.push_back(x);
  return out;
}

ConfigNode ConfigNode::from_sites(const std::vector<int>& sites, int n_sites) {
  ConfigNode node;
  for (int x : sites) {
    if (x < 0 || x >= n_sites) throw InputError("site " + std::to_string(x + 1) + " out of range");
    if (node.contains(x)) throw InputError("site " + std::to_string(x + 1) + " repeated");
    node.occupied |= Mask{1} << x;
  }
  return node;
}

ConfigPath find_path(const LatticeSpec& spec, ConfigNode x, ConfigNode y) {
  const int n = spec.n_sites();
  if (x.size() != y.size()) throw InputError("configurations have different particle numbers");
  const Mask range = (Mask{1} << n) - 1;
  if ((x.occupied & ~range) || (y.occupied & ~range)) throw InputError("configuration site out of range");
  const ConnectivityReport conn = is_connected(spec);
  if (!conn.connected) throw InputError("lattice is disconnected: components " + component_text(conn));

  const auto adj = neighbours(spec);
  ConfigPath raw;
  ConfigNode cur = x;
  raw.nodes.push_back(cur);
  auto step = [&](int from, int to) {
    cur.occupied = (cur.occupied & ~(Mask{1} << from)) | (Mask{1} << to);
    raw.moves.push_back({from, to, spec.hopping(to, from)});
    raw.nodes.push_back(cur);
  };

  for (int target = 0; target < n; ++target) {
    if (!y.contains(target) || cur.contains(target)) continue;
    const std::vector<int> route =
        bfs_sites(adj, target, [&](int s) { return cur.contains(s) && !y.contains(s); });
    // route[0] = target (empty), route.back() holds a spare marker.
    std::vector<std::size_t> occupied;
    for (std::size_t i = 1; i < route.size(); ++i)
      if (cur.contains(route[i])) occupied.push_back(i);
    std::size_t hole = 0;
    for (std::size_t i : occupied) {
      for (std::size_t p = i; p > hole; --p) step(route[p], route[p - 1]);
      hole = i;
    }
  }

  // Splice out revisited configurations.
  ConfigPath path;
  std::map<Mask, std::size_t> seen;
  path.nodes.push_back(raw.nodes.front());
  seen[raw.nodes.front().occupied] = 0;
  for (std::size_t i = 0; i < raw.moves.size(); ++i) {
    const ConfigNode next = raw.nodes[i + 1];
    if (auto it = seen.find(next.occupied); it != seen.end()) {
      const std::size_t keep = it->second;
      for (std::size_t j = keep + 1; j < path.nodes.size(); ++j) seen.erase(path.nodes[j].occupied);
      path.nodes.resize(keep + 1);
      path.moves.resize(keep);
      continue;
    }
    seen[next.occupied] = path.nodes.size();
    path.nodes.push_back(next);
    path.moves.push_back(raw.moves[i]);
  }
  return path;
}

std::string validate_path(const LatticeSpec& spec, const ConfigPath& path) {
  if (path.nodes.empty()) return "empty path";
  if (path.moves.size() + 1 != path.nodes.size()) return "move count does not match node count";
  std::vector<Mask> seen;
  for (const auto& node : path.nodes) seen.push_back(node.occupied);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return "a configuration repeats";
  for (std::size_t i = 0; i < path.moves.size(); ++i) {
    const ConfigMove& m = path.moves[i];
    const ConfigNode a = path.nodes[i];
    const ConfigNode b = path.nodes[i + 1];
    const std::string where = "step " + std::to_string(i + 1);
    if (m.from < 0 || m.to < 0 || m.from >= spec.n_sites() || m.to >= spec.n_sites())
      return where + ": site out of range";
    if (!a.contains(m.from) || a.contains(m.to)) return where + ": illegal move";
    if (b.occupied != ((a.occupied & ~(Mask{1} << m.from)) | (Mask{1} << m.to)))
      return where + ": node does not follow from the move";
    if (m.from == m.to || spec.hopping(m.to, m.from) == 0.0) return where + ": no bond";
  }
  return {};
}

ChainProduct verify_chain_product(const LatticeSpec& spec, const ConfigPath& path) {
  if (const std::string why = validate_path(spec, path); !why.empty())
    throw InputError("invalid path: " + why);
  const int n = spec.n_sites();
  const int particles = path.nodes.front().size();
  const SectorBasis basis(n, Sector{particles, 0});
  const SparseMatrix k = build_kinetic(spec, basis).matrix;

  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(static_cast<Eigen::Index>(basis.index({path.nodes.front().occupied, 0}))) = 1.0;
  auto project = [&](const ConfigNode& node) {
    v = build_projector(node.sites(), basis).matrix * v;
  };
  project(path.nodes.front());
  ChainProduct out;
  out.expected_abs = 1.0;
  for (std::size_t i = 1; i < path.nodes.size(); ++i) {
    v = k * v;
    project(path.nodes[i]);
    out.expected_abs *= std::abs(path.moves[i - 1].t);
  }
  out.value = v(static_cast<Eigen::Index>(basis.index({path.nodes.back().occupied, 0})));
  out.nonzero = out.value != 0.0;
  return out;
}

CensusReport connectivity_census(const LatticeSpec& spec, int n_particles, std::size_t cap) {
  const int n = spec.n_sites();
  if (n_particles < 0 || n_particles > n) throw InputError("particle number out of range");
  const long long count = binomial(n, n_particles);
  if (count > static_cast<long long>(cap)) throw CapExceeded("configuration graph nodes", count, static_cast<long long>(cap));

  const std::vector<Mask> nodes = masks_with_popcount(n, n_particles);
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };

  CensusReport report;
  report.n_particles = n_particles;
  report.nodes = nodes.size();
  report.lattice_connected = is_connected(spec).connected;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (int from = 0; from < n; ++from) {
      if (!(nodes[i] >> from & 1u)) continue;
      for (int to = 0; to < n; ++to) {
        if (to == from || (nodes[i] >> to & 1u) || spec.hopping(from, to) == 0.0) continue;
        const Mask next = (nodes[i] & ~(Mask{1} << from)) | (Mask{1} << to);
        if (next < nodes[i]) continue;  // each undirected edge once
        ++report.edges;
        const std::size_t j = mask_rank(next);
        const std::size_t ri = root(i);
        const std::size_t rj = root(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  std::map<std::size_t, int> sizes;
  for (std::size_t i = 0; i < nodes.size(); ++i) ++sizes[root(i)];
  report.components = static_cast<int>(sizes.size());
  for (const auto& [r, size] : sizes) report.component_sizes.push_back(size);
  return report;
}

}  // namespace towers
