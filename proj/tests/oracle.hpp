#pragma once

// Independent reference constructions used only by the tests.

#include "towers/fockspace.hpp"
#include "towers/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <vector>

namespace oracle {

// Full Fock space on 2n modes: mode p < n is (p, up), mode n + y is (y, down).
// Basis index = occupation bitmask over modes.
inline Eigen::MatrixXd annihilator(int n, int mode) {
  const int dim = 1 << (2 * n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    if (!(s >> mode & 1)) continue;
    const int below = std::popcount(static_cast<unsigned>(s & ((1 << mode) - 1)));
    c(s ^ (1 << mode), s) = below % 2 ? -1.0 : 1.0;
  }
  return c;
}

struct FullFock {
  using Sparse = Eigen::SparseMatrix<double>;
  int n;
  std::vector<Eigen::MatrixXd> c;  // annihilators per mode
  std::vector<Sparse> cs;          // same, sparse, for products

  explicit FullFock(int sites) : n(sites) {
    for (int p = 0; p < 2 * n; ++p) {
      c.push_back(annihilator(n, p));
      cs.push_back(c.back().sparseView());
    }
  }
  int up(int x) const { return x; }
  int down(int x) const { return n + x; }
  Sparse number_sparse(int mode) const { return Sparse(cs[mode].transpose()) * cs[mode]; }
  Eigen::MatrixXd number(int mode) const { return Eigen::MatrixXd(number_sparse(mode)); }

  Eigen::MatrixXd hubbard(const towers::LatticeSpec& spec) const {
    const int dim = 1 << (2 * n);
    Sparse h(dim, dim);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const double t = spec.hopping(x, y);
        if (t == 0.0) continue;
        h += t * (Sparse(Sparse(cs[up(x)].transpose()) * cs[up(y)]) +
                  Sparse(Sparse(cs[down(x)].transpose()) * cs[down(y)]));
      }
    for (int x = 0; x < n; ++x) h += spec.interaction(x) * Sparse(number_sparse(up(x)) * number_sparse(down(x)));
    return Eigen::MatrixXd(h);
  }

  Sparse s_plus_sparse() const {
    Sparse s(cs[0].rows(), cs[0].cols());
    for (int x = 0; x < n; ++x) s += Sparse(Sparse(cs[up(x)].transpose()) * cs[down(x)]);
    return s;
  }
  Sparse s_z_sparse() const {
    Sparse s(cs[0].rows(), cs[0].cols());
    for (int x = 0; x < n; ++x) s += 0.5 * (number_sparse(up(x)) - number_sparse(down(x)));
    return s;
  }
  Eigen::MatrixXd s_plus() const { return Eigen::MatrixXd(s_plus_sparse()); }
  Eigen::MatrixXd s_z() const { return Eigen::MatrixXd(s_z_sparse()); }
  Eigen::MatrixXd s_squared() const {
    const Sparse sp = s_plus_sparse();
    const Sparse sm = sp.transpose();
    const Sparse sz = s_z_sparse();
    // S² = ½(S+S- + S-S+) + Sz²
    return Eigen::MatrixXd(Sparse(0.5 * (Sparse(sp * sm) + Sparse(sm * sp))) + Sparse(sz * sz));
  }
  Eigen::MatrixXd pair_raise(const std::vector<int>& eps) const {
    Sparse j(cs[0].rows(), cs[0].cols());
    for (int x = 0; x < n; ++x)
      j += (eps[x] ? -1.0 : 1.0) * Sparse(Sparse(cs[up(x)].transpose()) * Sparse(cs[down(x)].transpose()));
    return Eigen::MatrixXd(j);
  }

  // Fock index of a sector basis state.
  int index(const towers::FockState& s) const { return static_cast<int>(s.up | (s.down << n)); }

  // Restriction of a full-space operator to rows of `target` and columns of `source`.
  Eigen::MatrixXd restrict(const Eigen::MatrixXd& op, const towers::SectorBasis& target,
                           const towers::SectorBasis& source) const {
    Eigen::MatrixXd out(target.size(), source.size());
    for (std::size_t r = 0; r < target.size(); ++r)
      for (std::size_t k = 0; k < source.size(); ++k)
        out(r, k) = op(index(target.state(r)), index(source.state(k)));
    return out;
  }
};

// Graph helpers on an adjacency matrix (nonzero off-diagonal = edge).
inline std::vector<std::vector<int>> adjacency(const Eigen::MatrixXd& t) {
  std::vector<std::vector<int>> adj(t.rows());
  for (int x = 0; x < t.rows(); ++x)
    for (int y = 0; y < t.cols(); ++y)
      if (x != y && t(x, y) != 0.0) adj[x].push_back(y);
  return adj;
}

// Brute force over all 2^n colourings.
inline bool bipartite_brute_force(const Eigen::MatrixXd& t) {
  const int n = static_cast<int>(t.rows());
  for (int colouring = 0; colouring < (1 << n); ++colouring) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = x + 1; y < n && ok; ++y)
        if (t(x, y) != 0.0 && ((colouring >> x & 1) == (colouring >> y & 1))) ok = false;
    if (ok) return true;
  }
  return false;
}

inline int component_count(const std::vector<std::vector<int>>& adj) {
  std::vector<int> seen(adj.size(), 0);
  int count = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (seen[s]) continue;
    ++count;
    std::deque<int> q{static_cast<int>(s)};
    seen[s] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push_back(v);
        }
    }
  }
  return count;
}

// Explicit configuration graph: nodes are N-subsets, edges single legal hops.
struct ConfigGraph {
  std::vector<unsigned> nodes;
  std::map<unsigned, int> index;
  std::vector<std::vector<int>> adj;
};

inline ConfigGraph config_graph(const Eigen::MatrixXd& t, int particles) {
  const int n = static_cast<int>(t.rows());
  ConfigGraph g;
  for (unsigned m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == particles) {
      g.index[m] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(m);
    }
  g.adj.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const unsigned diff = g.nodes[i] ^ g.nodes[j];
      if (std::popcount(diff) != 2) continue;
      const unsigned from = g.nodes[i] & diff;
      const unsigned to = g.nodes[j] & diff;
      if (t(std::countr_zero(from), std::countr_zero(to)) != 0.0) g.adj[i].push_back(static_cast<int>(j));
    }
  return g;
}

inline int bfs_distance(const ConfigGraph& g, unsigned a, unsigned b) {
  std::vector<int> dist(g.nodes.size(), -1);
  std::deque<int> q{g.index.at(a)};
  dist[g.index.at(a)] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : g.adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return dist[g.index.at(b)];
}

// Random symmetric hopping on n sites with edge probability p (may be
// disconnected).
inline Eigen::MatrixXd random_graph(std::mt19937_64& rng, int n, double p) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (unit(rng) < p) t(x, y) = t(y, x) = -0.5 - unit(rng);
  return t;
}

inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

}  // namespace oracle
