#pragma once

// Brute-force reference implementations. They share nothing with the library
// beyond the graph container, so they serve as independent oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <tuple>
#include <vector>

#include "ustlab/graph.hpp"

namespace ustlab::testing {

inline WeightedMultiGraph make_graph(std::size_t n,
                                     std::initializer_list<std::tuple<int, int, double>> edges) {
  std::vector<EdgeSpec> specs;
  for (auto [u, v, w] : edges) {
    specs.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  return WeightedMultiGraph::build(n, specs);
}

inline WeightedMultiGraph path_graph(std::size_t n) {
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    specs.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 1.0});
  }
  return WeightedMultiGraph::build(n, specs);
}

inline WeightedMultiGraph cycle_graph(std::size_t n) {
  std::vector<EdgeSpec> specs;
  for (std::size_t i = 0; i < n; ++i) {
    specs.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n), 1.0});
  }
  return WeightedMultiGraph::build(n, specs);
}

inline std::vector<std::vector<VertexId>> adjacency(std::size_t n,
                                                    const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

// Max over all sources of the BFS eccentricity.
inline std::size_t all_pairs_diameter(std::size_t n,
                                      const std::vector<std::pair<VertexId, VertexId>>& edges) {
  const auto adj = adjacency(n, edges);
  std::size_t best = 0;
  for (VertexId s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<VertexId> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const VertexId x = q.front();
      q.pop();
      for (VertexId y : adj[x]) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          best = std::max<std::size_t>(best, dist[y]);
          q.push(y);
        }
      }
    }
  }
  return best;
}

inline std::vector<std::pair<VertexId, VertexId>> tree_pairs(const WeightedMultiGraph& g,
                                                            const SpanningTree& t) {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (EdgeId e : t.edges()) out.emplace_back(g.edge(e).u, g.edge(e).v);
  return out;
}

inline bool spans(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  if (n == 0) return true;
  const auto adj = adjacency(n, edges);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const VertexId x = stack.back();
    stack.pop_back();
    for (VertexId y : adj[x]) {
      if (!seen[y]) {
        seen[y] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

// Every (n-1)-subset of edges that connects all vertices, in lexicographic
// order of sorted edge ids.
inline std::vector<std::vector<EdgeId>> brute_trees(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  std::vector<std::vector<EdgeId>> out;
  if (n == 0 || m + 1 < n) return out;
  std::vector<char> pick(m, 0);
  std::fill(pick.begin(), pick.begin() + (n - 1), 1);
  do {
    std::vector<EdgeId> chosen;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (EdgeId e = 0; e < m; ++e) {
      if (pick[e]) {
        chosen.push_back(e);
        pairs.emplace_back(g.edge(e).u, g.edge(e).v);
      }
    }
    if (spans(n, pairs)) out.push_back(chosen);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(out.begin(), out.end());
  return out;
}

inline double tree_weight(const WeightedMultiGraph& g, const std::vector<EdgeId>& edges) {
  double s = 0.0;
  for (EdgeId e : edges) s += g.edge(e).logw;
  return std::exp(s);
}

// Unweighted cut size and weighted cut / volume for a vertex bitmask.
struct CutStats {
  double cut = 0.0;
  double weighted_cut = 0.0;
  double volume = 0.0;
};

inline CutStats cut_stats(const WeightedMultiGraph& g, std::uint32_t mask) {
  CutStats c;
  for (const Edge& e : g.edges()) {
    const bool a = (mask >> e.u) & 1u;
    const bool b = (mask >> e.v) & 1u;
    const double w = std::exp(e.logw);
    if (a != b) {
      c.cut += 1.0;
      c.weighted_cut += w;
    }
    if (a) c.volume += w;
    if (b) c.volume += w;
  }
  return c;
}

inline double brute_iso(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  double best = INFINITY;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (2 * static_cast<std::size_t>(size) > n) continue;
    best = std::min(best, cut_stats(g, mask).cut / size);
  }
  return best;
}

// Phi(S) = w(S, S^c) / (2 w(S)) restricted to pi(S) <= r, where w(S) is the
// total strength of S; equivalent to Q(S, S^c)/pi(S) for the lazy walk.
inline double brute_phi(const WeightedMultiGraph& g, double r = 0.5) {
  const std::size_t n = g.num_vertices();
  double total = 0.0;
  for (const Edge& e : g.edges()) total += 2.0 * std::exp(e.logw);
  double best = INFINITY;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    const CutStats c = cut_stats(g, mask);
    if (c.volume / total > r + 1e-12) continue;
    best = std::min(best, c.weighted_cut / (2.0 * c.volume));
  }
  return best;
}

// Random tree by uniform attachment on a random relabelling.
inline std::vector<std::pair<VertexId, VertexId>> random_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    edges.emplace_back(perm[pick(rng)], perm[i]);
  }
  return edges;
}

inline WeightedMultiGraph graph_of(std::size_t n,
                                   const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<EdgeSpec> specs;
  for (auto [u, v] : edges) specs.push_back({u, v, 1.0});
  return WeightedMultiGraph::build(n, specs);
}

inline SpanningTree whole_tree(const WeightedMultiGraph& g) {
  std::vector<EdgeId> all(g.num_edges());
  std::iota(all.begin(), all.end(), EdgeId{0});
  return SpanningTree::from_edges(g, all);
}

}  // namespace ustlab::testing
