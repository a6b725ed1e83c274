#include "ustlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ustlab/union_find.hpp"

namespace ustlab {

namespace {

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void check_edge_ids(const WeightedMultiGraph& g, std::span<const EdgeId> ids) {
  for (EdgeId e : ids) {
    if (e >= g.num_edges()) {
      throw std::out_of_range("unknown edge id " + std::to_string(e));
    }
  }
}

}  // namespace

WeightedMultiGraph WeightedMultiGraph::build(std::size_t n, std::span<const EdgeSpec> specs,
                                             WeightMode mode) {
  if (n >= kNoVertex) throw std::length_error("vertex count exceeds VertexId capacity");
  std::vector<Edge> edges;
  edges.reserve(specs.size());
  std::size_t loops = 0;
  for (const EdgeSpec& s : specs) {
    if (s.u >= n || s.v >= n) {
      throw std::out_of_range("edge endpoint out of range: (" + std::to_string(s.u) + "," +
                              std::to_string(s.v) + ") with n=" + std::to_string(n));
    }
    double logw = s.value;
    if (mode == WeightMode::kLinear) {
      if (!(s.value > 0.0) || !std::isfinite(s.value)) {
        throw std::invalid_argument("edge weight must be finite and positive, got " +
                                    std::to_string(s.value));
      }
      logw = std::log(s.value);
    } else if (!std::isfinite(s.value)) {
      throw std::invalid_argument("log-weight must be finite");
    }
    if (s.u == s.v) {
      ++loops;
      continue;
    }
    edges.push_back(Edge{s.u, s.v, logw, static_cast<EdgeId>(edges.size())});
  }
  WeightedMultiGraph g = from_edges(n, std::move(edges));
  g.dropped_loops_ = loops;
  return g;
}

WeightedMultiGraph WeightedMultiGraph::from_edges(std::size_t n, std::vector<Edge> edges) {
  WeightedMultiGraph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.index();
  return g;
}

void WeightedMultiGraph::index() {
  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  incidence_.resize(offsets_[n_]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    incidence_[cursor[e.u]++] = {static_cast<EdgeId>(i), e.v};
    incidence_[cursor[e.v]++] = {static_cast<EdgeId>(i), e.u};
  }

  max_logw_ = -std::numeric_limits<double>::infinity();
  min_logw_ = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) {
    max_logw_ = std::max(max_logw_, e.logw);
    min_logw_ = std::min(min_logw_, e.logw);
  }

  log_strength_.assign(n_, -std::numeric_limits<double>::infinity());
  std::vector<double> buf;
  for (VertexId x = 0; x < n_; ++x) {
    buf.clear();
    for (const Incidence& inc : incident(x)) buf.push_back(edges_[inc.edge].logw);
    log_strength_[x] = log_sum_exp(buf);
  }

  strength_.clear();
  if (edges_.empty() || max_logw_ < kLinearLogWeightLimit) {
    strength_.assign(n_, 0.0);
    for (const Edge& e : edges_) {
      const double w = std::exp(e.logw);
      strength_[e.u] += w;
      strength_[e.v] += w;
    }
  }
}

std::size_t WeightedMultiGraph::max_degree() const noexcept {
  std::size_t d = 0;
  for (std::size_t x = 0; x < n_; ++x) d = std::max(d, offsets_[x + 1] - offsets_[x]);
  return d;
}

double WeightedMultiGraph::weight(EdgeId e) const { return std::exp(edge(e).logw); }

double WeightedMultiGraph::strength(VertexId x) const {
  if (strength_.empty()) {
    throw std::domain_error("linear strengths unavailable: some log-weight is >= 700");
  }
  return strength_.at(x);
}

bool WeightedMultiGraph::connected() const {
  if (n_ <= 1) return true;
  UnionFind uf(n_);
  for (const Edge& e : edges_) uf.unite(e.u, e.v);
  return uf.num_sets() == 1;
}

WeightedMultiGraph WeightedMultiGraph::with_log_weights(std::span<const double> logw) const {
  if (logw.size() != edges_.size()) {
    throw std::invalid_argument("log-weight vector size does not match edge count");
  }
  std::vector<Edge> edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(logw[i])) throw std::invalid_argument("log-weight must be finite");
    edges[i].logw = logw[i];
  }
  return from_edges(n_, std::move(edges));
}

std::size_t ContractionMap::max_block() const noexcept {
  std::size_t m = 0;
  for (const auto& b : blocks) m = std::max(m, b.size());
  return m;
}

std::pair<WeightedMultiGraph, ContractionMap> contract(const WeightedMultiGraph& g,
                                                       std::span<const EdgeId> a) {
  check_edge_ids(g, a);
  const std::size_t n = g.num_vertices();
  std::vector<char> in_a(g.num_edges(), 0);
  UnionFind uf(n);
  for (EdgeId e : a) {
    in_a[e] = 1;
    uf.unite(g.edge(e).u, g.edge(e).v);
  }

  ContractionMap map;
  map.forward.assign(n, kNoVertex);
  std::vector<VertexId> root_id(n, kNoVertex);
  for (VertexId x = 0; x < n; ++x) {
    const auto r = uf.find(x);
    if (root_id[r] == kNoVertex) {
      root_id[r] = static_cast<VertexId>(map.blocks.size());
      map.blocks.emplace_back();
    }
    map.forward[x] = root_id[r];
    map.blocks[root_id[r]].push_back(x);
  }

  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (in_a[e]) continue;
    const Edge& old = g.edge(e);
    const VertexId u = map.forward[old.u];
    const VertexId v = map.forward[old.v];
    if (u == v) {
      ++map.dropped_self_loops;
      continue;
    }
    edges.push_back(Edge{u, v, old.logw, old.origin});
    map.edge_source.push_back(e);
  }
  return {WeightedMultiGraph::from_edges(map.blocks.size(), std::move(edges)), std::move(map)};
}

WeightedMultiGraph delete_edges(const WeightedMultiGraph& g, std::span<const EdgeId> b) {
  check_edge_ids(g, b);
  std::vector<char> drop(g.num_edges(), 0);
  for (EdgeId e : b) drop[e] = 1;
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!drop[e]) edges.push_back(g.edge(e));
  }
  return WeightedMultiGraph::from_edges(g.num_vertices(), std::move(edges));
}

Components components(const WeightedMultiGraph& g, std::span<const char> keep) {
  const std::size_t n = g.num_vertices();
  UnionFind uf(n);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (keep.empty() || keep[e]) uf.unite(g.edge(e).u, g.edge(e).v);
  }
  // Collect (size, first vertex) per root, then order largest-first.
  std::vector<std::uint32_t> first(n, kNoVertex);
  std::vector<std::uint32_t> roots;
  for (VertexId x = 0; x < n; ++x) {
    const auto r = uf.find(x);
    if (first[r] == kNoVertex) {
      first[r] = x;
      roots.push_back(r);
    }
  }
  std::stable_sort(roots.begin(), roots.end(), [&](std::uint32_t a, std::uint32_t b) {
    return uf.set_size(a) > uf.set_size(b);
  });
  std::vector<std::uint32_t> label_of_root(n, 0);
  Components c;
  c.sizes.reserve(roots.size());
  for (std::uint32_t i = 0; i < roots.size(); ++i) {
    label_of_root[roots[i]] = i;
    c.sizes.push_back(uf.set_size(roots[i]));
  }
  c.label.resize(n);
  for (VertexId x = 0; x < n; ++x) c.label[x] = label_of_root[uf.find(x)];
  return c;
}

Components components(const WeightedMultiGraph& g) { return components(g, {}); }

SpanningTree SpanningTree::from_edges(const WeightedMultiGraph& g, std::vector<EdgeId> edges) {
  const std::size_t n = g.num_vertices();
  std::sort(edges.begin(), edges.end());
  if (n == 0) throw std::invalid_argument("spanning tree of an empty graph");
  if (edges.size() != n - 1) {
    throw std::invalid_argument("spanning tree needs n-1 edges, got " +
                                std::to_string(edges.size()));
  }
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("duplicate edge in spanning tree");
  }
  UnionFind uf(n);
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adj(n);
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    if (!uf.unite(ed.u, ed.v)) throw std::invalid_argument("edge set contains a cycle");
    adj[ed.u].push_back({ed.v, e});
    adj[ed.v].push_back({ed.u, e});
  }

  SpanningTree t;
  t.n_ = n;
  t.edges_ = std::move(edges);
  t.parent_.assign(n, kNoVertex);
  t.parent_edge_.assign(n, kNoEdge);
  t.depth_.assign(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const VertexId x = stack.back();
    stack.pop_back();
    for (auto [y, e] : adj[x]) {
      if (seen[y]) continue;
      seen[y] = 1;
      t.parent_[y] = x;
      t.parent_edge_[y] = e;
      t.depth_[y] = t.depth_[x] + 1;
      stack.push_back(y);
    }
  }
  return t;
}

std::vector<VertexId> SpanningTree::path(VertexId a, VertexId b) const {
  if (a >= n_ || b >= n_) throw std::out_of_range("path endpoint out of range");
  std::vector<VertexId> front;
  std::vector<VertexId> back;
  while (depth_[a] > depth_[b]) {
    front.push_back(a);
    a = parent_[a];
  }
  while (depth_[b] > depth_[a]) {
    back.push_back(b);
    b = parent_[b];
  }
  while (a != b) {
    front.push_back(a);
    back.push_back(b);
    a = parent_[a];
    b = parent_[b];
  }
  front.push_back(a);
  front.insert(front.end(), back.rbegin(), back.rend());
  return front;
}

std::size_t tree_diameter(const SpanningTree& t) {
  const std::size_t n = t.num_vertices();
  if (n <= 1) return 0;
  std::vector<std::size_t> offsets(n + 1, 0);
  const auto& parent = t.parent();
  for (VertexId x = 1; x < n; ++x) {
    ++offsets[x + 1];
    ++offsets[parent[x] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<VertexId> adj(offsets[n]);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (VertexId x = 1; x < n; ++x) {
    adj[cursor[x]++] = parent[x];
    adj[cursor[parent[x]]++] = x;
  }

  std::vector<std::uint32_t> dist(n);
  std::vector<VertexId> queue(n);
  auto farthest = [&](VertexId src) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<std::uint32_t>::max());
    std::size_t head = 0, tail = 0;
    queue[tail++] = src;
    dist[src] = 0;
    VertexId last = src;
    while (head < tail) {
      const VertexId x = queue[head++];
      last = x;
      for (std::size_t i = offsets[x]; i < offsets[x + 1]; ++i) {
        const VertexId y = adj[i];
        if (dist[y] == std::numeric_limits<std::uint32_t>::max()) {
          dist[y] = dist[x] + 1;
          queue[tail++] = y;
        }
      }
    }
    return std::pair{last, dist[last]};
  };
  const auto [a, unused] = farthest(0);
  (void)unused;
  return farthest(a).second;
}

}  // namespace ustlab
