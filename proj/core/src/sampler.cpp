#include "ustlab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ustlab/union_find.hpp"

namespace ustlab {

namespace {

// Effective conductance between s and t after eliminating every other vertex
// (star-mesh transform). Only sums and products of non-negative numbers are
// formed, so relative accuracy holds over any dynamic range of weights.
double kron_conductance(std::vector<double>& w, std::size_t k, std::size_t s, std::size_t t) {
  std::vector<char> gone(k, 0);
  std::vector<std::size_t> nbrs;
  for (std::size_t v = 0; v < k; ++v) {
    if (v == s || v == t) continue;
    double total = 0.0;
    nbrs.clear();
    for (std::size_t j = 0; j < k; ++j) {
      if (gone[j] || j == v) continue;
      const double x = w[v * k + j];
      if (x > 0.0) {
        total += x;
        nbrs.push_back(j);
      }
    }
    gone[v] = 1;
    if (total == 0.0) continue;
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      const std::size_t i = nbrs[a];
      const double wi = w[i * k + v] / total;
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
        const std::size_t j = nbrs[b];
        const double add = wi * w[v * k + j];
        w[i * k + j] += add;
        w[j * k + i] += add;
      }
    }
  }
  return w[s * k + t];
}

}  // namespace

const char* to_string(SamplerAlgorithm a) {
  switch (a) {
    case SamplerAlgorithm::kAuto: return "auto";
    case SamplerAlgorithm::kWilson: return "wilson";
    case SamplerAlgorithm::kAldousBroder: return "aldous-broder";
    case SamplerAlgorithm::kSequential: return "sequential";
  }
  return "unknown";
}

LazyKernelRow lazy_kernel_row(const WeightedMultiGraph& g, VertexId x) {
  if (x >= g.num_vertices()) throw std::out_of_range("vertex out of range");
  if (g.degree(x) == 0) throw std::invalid_argument("isolated vertex has no walk kernel");
  const double log_total = g.log_strength(x);
  std::map<VertexId, double> agg;
  for (const Incidence& inc : g.incident(x)) {
    agg[inc.neighbor] += std::exp(g.edge(inc.edge).logw - log_total);
  }
  LazyKernelRow row;
  row.vertex = x;
  row.moves.reserve(agg.size());
  for (auto [y, p] : agg) row.moves.emplace_back(y, 0.5 * p);
  return row;
}

LoopErasedPath loop_erase(std::span<const VertexId> walk) {
  LoopErasedPath out;
  out.walk_length = walk.size();
  std::unordered_map<VertexId, std::size_t> position;
  for (VertexId x : walk) {
    auto it = position.find(x);
    if (it != position.end()) {
      for (std::size_t i = it->second + 1; i < out.vertices.size(); ++i) {
        position.erase(out.vertices[i]);
      }
      out.vertices.resize(it->second + 1);
    } else {
      position.emplace(x, out.vertices.size());
      out.vertices.push_back(x);
    }
  }
  return out;
}

UstSampler::UstSampler(const WeightedMultiGraph& g, SamplerOptions options)
    : g_(&g), options_(std::move(options)), algorithm_(options_.algorithm) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw std::invalid_argument("cannot sample a spanning tree of an empty graph");
  if (!g.connected()) throw std::invalid_argument("graph is disconnected");

  const double spread = g.num_edges() ? g.max_logw() - g.min_logw() : 0.0;
  if (algorithm_ == SamplerAlgorithm::kAuto) {
    if (spread <= kWilsonLogWeightSpread) {
      algorithm_ = SamplerAlgorithm::kWilson;
    } else if (n <= kSequentialMaxVertices) {
      algorithm_ = SamplerAlgorithm::kSequential;
    } else {
      throw std::domain_error(
          "weight range outside sampler validity: log-weight spread " + std::to_string(spread) +
          " traps the walk and n=" + std::to_string(n) + " exceeds the sequential sampler limit " +
          std::to_string(kSequentialMaxVertices));
    }
  }
  if (algorithm_ == SamplerAlgorithm::kSequential && n > kSequentialMaxVertices) {
    throw std::domain_error("sequential sampler limited to n <= " +
                            std::to_string(kSequentialMaxVertices));
  }

  if (algorithm_ == SamplerAlgorithm::kSequential) {
    descending_.resize(g.num_edges());
    std::iota(descending_.begin(), descending_.end(), EdgeId{0});
    std::stable_sort(descending_.begin(), descending_.end(), [&](EdgeId a, EdgeId b) {
      return g.edge(a).logw > g.edge(b).logw;
    });
    return;
  }

  offsets_.assign(n + 1, 0);
  for (VertexId x = 0; x < n; ++x) offsets_[x + 1] = offsets_[x] + g.degree(x);
  cumulative_.resize(offsets_[n]);
  for (VertexId x = 0; x < n; ++x) {
    const auto inc = g.incident(x);
    const double log_total = g.log_strength(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
      acc += std::exp(g.edge(inc[i].edge).logw - log_total);
      cumulative_[offsets_[x] + i] = acc;
    }
    if (!inc.empty()) cumulative_[offsets_[x] + inc.size() - 1] = 1.0;
  }
}

EdgeId UstSampler::step(VertexId x, Rng& rng) const {
  const double u = uniform_open01(rng);
  const std::size_t lo = offsets_[x], hi = offsets_[x + 1];
  std::size_t i = lo;
  if (hi - lo <= 8) {
    while (cumulative_[i] < u) ++i;
  } else {
    i = static_cast<std::size_t>(
        std::lower_bound(cumulative_.begin() + lo, cumulative_.begin() + hi, u) -
        cumulative_.begin());
  }
  return g_->incident(x)[i - lo].edge;
}

SpanningTree UstSampler::wilson(Rng& rng) const {
  const WeightedMultiGraph& g = *g_;
  const std::size_t n = g.num_vertices();
  std::vector<char> in_tree(n, 0);
  std::vector<EdgeId> next(n, kNoEdge);
  std::vector<EdgeId> tree;
  tree.reserve(n - 1);
  std::vector<VertexId> branch;
  in_tree[0] = 1;
  for (VertexId start = 1; start < n; ++start) {
    // Overwriting next[] on revisits erases loops chronologically.
    for (VertexId x = start; !in_tree[x];) {
      next[x] = step(x, rng);
      x = g.edge(next[x]).other(x);
    }
    branch.clear();
    VertexId x = start;
    while (!in_tree[x]) {
      if (options_.on_branch) branch.push_back(x);
      in_tree[x] = 1;
      tree.push_back(next[x]);
      x = g.edge(next[x]).other(x);
    }
    if (options_.on_branch && !branch.empty()) {
      branch.push_back(x);
      options_.on_branch(branch);
    }
  }
  return SpanningTree::from_edges(g, std::move(tree));
}

SpanningTree UstSampler::aldous_broder(Rng& rng) const {
  const WeightedMultiGraph& g = *g_;
  const std::size_t n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<EdgeId> tree;
  tree.reserve(n - 1);
  seen[0] = 1;
  std::size_t remaining = n - 1;
  VertexId x = 0;
  while (remaining > 0) {
    const EdgeId e = step(x, rng);
    x = g.edge(e).other(x);
    if (!seen[x]) {
      seen[x] = 1;
      tree.push_back(e);
      --remaining;
    }
  }
  return SpanningTree::from_edges(g, std::move(tree));
}

// Decides edges from heaviest to lightest. When edge e is decided, every
// heavier edge has been contracted or deleted, so all remaining weights are at
// most w_e and P(e in T | past) = w_e / (w_e + C), where C is the effective
// conductance between the endpoints of e through the other remaining edges.
SpanningTree UstSampler::sequential(Rng& rng) const {
  const WeightedMultiGraph& g = *g_;
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  UnionFind uf(n);
  std::vector<char> alive(m, 1);
  std::vector<EdgeId> tree;
  tree.reserve(n - 1);
  std::vector<std::size_t> dense(n);
  std::vector<double> w;

  for (EdgeId e : descending_) {
    if (tree.size() + 1 == n) break;
    const Edge& ed = g.edge(e);
    if (uf.same(ed.u, ed.v)) {
      alive[e] = 0;
      continue;
    }
    std::size_t k = 0;
    std::vector<std::size_t> root_slot(n, SIZE_MAX);
    for (VertexId x = 0; x < n; ++x) {
      const auto r = uf.find(x);
      if (root_slot[r] == SIZE_MAX) root_slot[r] = k++;
      dense[x] = root_slot[r];
    }
    w.assign(k * k, 0.0);
    for (EdgeId f = 0; f < m; ++f) {
      if (!alive[f] || f == e) continue;
      const Edge& fd = g.edge(f);
      const std::size_t a = dense[fd.u], b = dense[fd.v];
      if (a == b) continue;
      const double rel = std::exp(fd.logw - ed.logw);
      w[a * k + b] += rel;
      w[b * k + a] += rel;
    }
    const double c = kron_conductance(w, k, dense[ed.u], dense[ed.v]);
    const double keep = 1.0 / (1.0 + c);
    if (uniform_open01(rng) < keep) {
      uf.unite(ed.u, ed.v);
      tree.push_back(e);
    }
    alive[e] = 0;
  }
  return SpanningTree::from_edges(g, std::move(tree));
}

SpanningTree UstSampler::operator()(Rng& rng) const {
  if (g_->num_vertices() == 1) return SpanningTree::from_edges(*g_, {});
  switch (algorithm_) {
    case SamplerAlgorithm::kWilson: return wilson(rng);
    case SamplerAlgorithm::kAldousBroder: return aldous_broder(rng);
    case SamplerAlgorithm::kSequential: return sequential(rng);
    case SamplerAlgorithm::kAuto: break;
  }
  throw std::logic_error("sampler algorithm not resolved");
}

SpanningTree sample_ust(const WeightedMultiGraph& g, std::uint64_t seed,
                        const SamplerOptions& options) {
  UstSampler sampler(g, options);
  Rng rng(seed);
  return sampler(rng);
}

SpanningTree kruskal_min_tree(const WeightedMultiGraph& g, std::span<const double> keys) {
  if (keys.size() != g.num_edges()) {
    throw std::invalid_argument("need one key per edge");
  }
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
  });
  const std::size_t n = g.num_vertices();
  UnionFind uf(n);
  std::vector<EdgeId> tree;
  tree.reserve(n ? n - 1 : 0);
  for (EdgeId e : order) {
    if (tree.size() + 1 >= n) break;
    if (uf.unite(g.edge(e).u, g.edge(e).v)) tree.push_back(e);
  }
  if (n == 0 || tree.size() + 1 != n) throw std::invalid_argument("graph is disconnected");
  return SpanningTree::from_edges(g, std::move(tree));
}

}  // namespace ustlab
