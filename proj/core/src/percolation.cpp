#include "ustlab/percolation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "ustlab/generators.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/rng.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/union_find.hpp"

namespace ustlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Subgraph induced by the vertices with keep_vertex set, restricted to edges
// with keep_edge set (all edges if empty). Vertices are relabelled in order.
WeightedMultiGraph induced(const WeightedMultiGraph& g, const std::vector<char>& keep_vertex,
                           std::span<const char> keep_edge) {
  std::vector<VertexId> local(g.num_vertices(), kNoVertex);
  std::size_t k = 0;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (keep_vertex[x]) local[x] = static_cast<VertexId>(k++);
  }
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!keep_edge.empty() && !keep_edge[e]) continue;
    Edge ed = g.edge(e);
    if (local[ed.u] == kNoVertex || local[ed.v] == kNoVertex) continue;
    ed.u = local[ed.u];
    ed.v = local[ed.v];
    edges.push_back(ed);
  }
  return WeightedMultiGraph::from_edges(k, std::move(edges));
}

std::size_t largest(const Components& c) { return c.sizes.empty() ? 0 : c.sizes.front(); }

double lattice_ratio(double cut, std::size_t size, double dim) {
  return cut / std::pow(static_cast<double>(size), (dim - 1.0) / dim);
}

// Lattice B2 on the giant cluster: exhaustive within the budget, otherwise a
// search over breadth-first balls, which are the natural low-boundary sets.
void lattice_b2(const WeightedMultiGraph& c1, std::size_t n, const EventOptions& opt,
                EventReport& r) {
  const double dim = static_cast<double>(opt.dim);
  const double log_n = std::log(static_cast<double>(n));
  const double lower = std::pow(log_n, dim * dim / (dim - 1.0));
  const std::size_t k = c1.num_vertices();
  const auto min_size = static_cast<std::size_t>(std::max(1.0, std::ceil(lower - 1e-9)));
  const std::size_t max_size = k / 2;
  r.lattice_min_ratio = kInf;
  r.lattice_argmin_size = 0;
  r.lattice_exhaustive = true;
  if (min_size > max_size) return;

  auto consider = [&](double cut, std::size_t size) {
    const double ratio = lattice_ratio(cut, size, dim);
    if (ratio < r.lattice_min_ratio) {
      r.lattice_min_ratio = ratio;
      r.lattice_argmin_size = size;
    }
  };

  if (k <= std::min(opt.iso_budget, kExactSubsetMaxVertices)) {
    const std::uint32_t full = (1u << k) - 1u;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (size < min_size || size > max_size) continue;
      double cut = 0.0;
      for (const Edge& e : c1.edges()) cut += ((mask >> e.u) ^ (mask >> e.v)) & 1u;
      consider(cut, size);
    }
    return;
  }

  r.lattice_exhaustive = false;
  Rng rng(opt.seed ^ 0x1a77ce5ULL);
  std::vector<char> in(k, 0);
  std::vector<VertexId> order;
  for (std::size_t s = 0; s < opt.iso_samples; ++s) {
    const auto centre = static_cast<VertexId>(uniform_open01(rng) * k);
    const std::size_t size =
        min_size + static_cast<std::size_t>(uniform_open01(rng) * (max_size - min_size + 1));
    order.clear();
    order.push_back(centre);
    in[centre] = 1;
    for (std::size_t head = 0; head < order.size() && order.size() < size; ++head) {
      for (const Incidence& inc : c1.incident(order[head])) {
        if (order.size() >= size) break;
        if (!in[inc.neighbor]) {
          in[inc.neighbor] = 1;
          order.push_back(inc.neighbor);
        }
      }
    }
    double cut = 0.0;
    for (VertexId x : order) {
      for (const Incidence& inc : c1.incident(x)) cut += in[inc.neighbor] ? 0.0 : 1.0;
    }
    consider(cut, order.size());
    for (VertexId x : order) in[x] = 0;
  }
}

}  // namespace

PercolationView threshold(const WeightedMultiGraph& g, double a) {
  if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("threshold A must exceed 1");
  PercolationView view;
  view.a = a;
  const double log_a = std::log(a);
  view.open.assign(g.num_edges(), 0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const double lw = g.edge(e).logw;
    if (lw >= -log_a && lw <= log_a) {
      view.open[e] = 1;
    } else {
      view.closed.push_back(e);
    }
  }
  view.clusters = components(g, view.open);
  view.p_hat = g.num_edges() ? static_cast<double>(view.num_open()) / g.num_edges() : 1.0;
  return view;
}

EventReport EventReport::recompute() const {
  EventReport r = *this;
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  r.b1 = 4 * giant_size >= 3 * n;
  r.b4 = static_cast<double>(max_closed_cluster) <= log_n;
  if (mode == EventMode::kExpander) {
    r.b2 = giant_iso.lower >= 1.0 / log_n;
    r.b2_not_refuted = giant_iso.upper >= 1.0 / log_n;
    r.b3 = static_cast<double>(max_outside_component) <= log_n;
  } else {
    const double dim = static_cast<double>(this->dim);
    r.b2 = lattice_min_ratio >= c0;
    r.b2_not_refuted = r.b2;
    r.b3 = static_cast<double>(max_outside_component) <= std::pow(log_n, dim / (dim - 1.0));
  }
  return r;
}

EventReport check_events(const WeightedMultiGraph& g, const PercolationView& view,
                         const EventOptions& opt) {
  const std::size_t n = g.num_vertices();
  if (view.open.size() != g.num_edges()) throw std::invalid_argument("view does not match graph");
  if (opt.mode == EventMode::kLattice) {
    if (opt.dim < 2) throw std::invalid_argument("lattice events need dimension d >= 2");
    if (!is_box(g, opt.dim, opt.half_side)) {
      throw std::invalid_argument("lattice mode requires the box [-L, L]^d");
    }
  }
  EventReport r;
  r.mode = opt.mode;
  r.dim = opt.dim;
  r.n = n;
  r.c0 = opt.c0;
  if (n == 0) return r;

  std::vector<char> in_giant(n, 0);
  for (VertexId x = 0; x < n; ++x) in_giant[x] = view.clusters.label[x] == 0;
  r.giant_size = largest(view.clusters);

  std::vector<char> outside(n);
  for (VertexId x = 0; x < n; ++x) outside[x] = !in_giant[x];
  r.max_outside_component = largest(components(induced(g, outside, {})));

  // Vertex counts of the clusters formed by closed edges.
  std::vector<char> closed_mask(g.num_edges(), 0);
  std::vector<char> touched(n, 0);
  for (EdgeId e : view.closed) {
    closed_mask[e] = 1;
    touched[g.edge(e).u] = touched[g.edge(e).v] = 1;
  }
  if (!view.closed.empty()) {
    r.max_closed_cluster = largest(components(induced(g, touched, closed_mask)));
  }

  const WeightedMultiGraph giant = induced(g, in_giant, view.open);
  if (opt.mode == EventMode::kExpander) {
    r.giant_iso = iso_bracket(giant, opt.iso_budget);
  } else {
    lattice_b2(giant, n, opt, r);
  }
  return r.recompute();
}

ConditionedPair condition_on_tree(const WeightedMultiGraph& g, const PercolationView& view,
                                  const SpanningTree& t) {
  const std::size_t n = g.num_vertices();
  if (view.open.size() != g.num_edges()) throw std::invalid_argument("view does not match graph");
  if (t.num_vertices() != n || t.edges().size() + 1 != std::max<std::size_t>(n, 1)) {
    throw std::invalid_argument("tree does not span the graph");
  }
  UnionFind uf(n);
  for (EdgeId e : t.edges()) {
    if (e >= g.num_edges() || !uf.unite(g.edge(e).u, g.edge(e).v)) {
      throw std::invalid_argument("tree does not span the graph");
    }
  }
  std::vector<char> in_tree(g.num_edges(), 0);
  for (EdgeId e : t.edges()) in_tree[e] = 1;

  std::vector<EdgeId> doomed;
  std::vector<EdgeId> tree_closed;
  for (EdgeId e : view.closed) (in_tree[e] ? tree_closed : doomed).push_back(e);

  ConditionedPair out;
  out.gpp = delete_edges(g, doomed);
  if (!out.gpp.connected()) throw std::logic_error("G'' lost connectivity");
  // Deletion keeps edge order, so the local id shifts by the deletions before it.
  std::vector<EdgeId> local;
  local.reserve(tree_closed.size());
  std::size_t shift = 0, j = 0;
  for (EdgeId e : tree_closed) {
    while (j < doomed.size() && doomed[j] < e) {
      ++shift;
      ++j;
    }
    local.push_back(static_cast<EdgeId>(e - shift));
  }
  auto [gp, map] = contract(out.gpp, local);
  out.gp = std::move(gp);
  out.map = std::move(map);
  out.deleted_edges = doomed.size();
  out.contracted_edges = tree_closed.size();
  out.dropped_self_loops = out.map.dropped_self_loops;
  return out;
}

std::vector<SweepRow> event_probability_sweep(const SweepSpec& spec) {
  if (!spec.make_graph) throw std::invalid_argument("sweep needs a graph generator");
  if (spec.trials == 0) throw std::invalid_argument("trials must be at least 1");
  spec.law.validate();
  const std::size_t per_trial = spec.a_grid.size();
  std::vector<SweepRow> rows(spec.trials * per_trial);
  parallel_for(spec.trials, spec.threads, [&](std::size_t trial) {
    const WeightedMultiGraph base = spec.make_graph(derive_seed(spec.seed, 3 * trial));
    const WeightedDraw draw = assign_weights(base, spec.law, derive_seed(spec.seed, 3 * trial + 1));
    const WeightedMultiGraph& g = draw.graph;
    const SpanningTree t = sample_ust(g, derive_seed(spec.seed, 3 * trial + 2));
    for (std::size_t i = 0; i < per_trial; ++i) {
      const PercolationView view = threshold(g, spec.a_grid[i]);
      EventOptions opt = spec.events;
      opt.seed = derive_seed(spec.seed, 3 * trial + 2) ^ i;
      const EventReport ev = check_events(g, view, opt);
      const ConditionedPair pair = condition_on_tree(g, view, t);
      SweepRow& row = rows[trial * per_trial + i];
      row.a = spec.a_grid[i];
      row.p_hat = view.p_hat;
      row.n = g.num_vertices();
      row.trial = trial;
      row.b1 = ev.b1;
      row.b2 = ev.b2;
      row.b3 = ev.b3;
      row.b4 = ev.b4;
      row.b2_not_refuted = ev.b2_not_refuted;
      row.maxblock = pair.map.max_block();
      row.dropped_self_loops = pair.dropped_self_loops;
    }
  });
  return rows;
}

std::string sweep_csv_header() {
  return "A,p_hat,n,trial,B1,B2,B3,B4,maxblock,dropped_self_loops,B2_not_refuted";
}

std::string to_csv(const SweepRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%zu,%d,%d,%d,%d,%zu,%zu,%d", r.a, r.p_hat, r.n,
                r.trial, int(r.b1), int(r.b2), int(r.b3), int(r.b4), r.maxblock,
                r.dropped_self_loops, int(r.b2_not_refuted));
  return buf;
}

}  // namespace ustlab
