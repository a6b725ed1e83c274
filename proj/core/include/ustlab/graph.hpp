#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace ustlab {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

// Log-weights at or above this bound are not representable as linear weights.
inline constexpr double kLinearLogWeightLimit = 700.0;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double logw = 0.0;
  // Id of this edge in the graph it was originally built in. Preserved by
  // contraction and deletion, so derived graphs can be compared edge-for-edge.
  EdgeId origin = 0;

  VertexId other(VertexId x) const noexcept { return x == u ? v : u; }
};

struct EdgeSpec {
  VertexId u;
  VertexId v;
  double value;  // linear weight or log-weight, depending on WeightMode
};

enum class WeightMode { kLinear, kLog };

struct Incidence {
  EdgeId edge;
  VertexId neighbor;
};

// Undirected multigraph with log-domain edge weights. Immutable once built;
// all surgery returns new graphs.
class WeightedMultiGraph {
 public:
  WeightedMultiGraph() = default;

  // Self-loops are dropped. Throws std::out_of_range for bad endpoints and
  // std::invalid_argument for non-positive linear or non-finite log weights.
  static WeightedMultiGraph build(std::size_t n, std::span<const EdgeSpec> edges,
                                  WeightMode mode = WeightMode::kLinear);

  // Edges with explicit origins; used by the surgery operations.
  static WeightedMultiGraph from_edges(std::size_t n, std::vector<Edge> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t dropped_self_loops() const noexcept { return dropped_loops_; }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Incidence> incident(VertexId x) const {
    return {incidence_.data() + offsets_.at(x), incidence_.data() + offsets_.at(x + 1)};
  }
  std::size_t degree(VertexId x) const { return offsets_.at(x + 1) - offsets_.at(x); }
  std::size_t max_degree() const noexcept;

  double weight(EdgeId e) const;
  double log_strength(VertexId x) const { return log_strength_.at(x); }
  // Linear strength; throws std::domain_error when some log-weight is >= 700.
  double strength(VertexId x) const;
  bool has_linear_strength() const noexcept { return !strength_.empty() || n_ == 0; }
  double max_logw() const noexcept { return max_logw_; }
  double min_logw() const noexcept { return min_logw_; }

  bool connected() const;

  // Same topology and origins, new log-weights (indexed by local edge id).
  WeightedMultiGraph with_log_weights(std::span<const double> logw) const;

 private:
  void index();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidence_;
  std::vector<double> strength_;
  std::vector<double> log_strength_;
  double max_logw_ = -std::numeric_limits<double>::infinity();
  double min_logw_ = std::numeric_limits<double>::infinity();
  std::size_t dropped_loops_ = 0;
};

// Quotient bookkeeping for G/A.
struct ContractionMap {
  std::vector<VertexId> forward;              // original vertex -> supervertex
  std::vector<std::vector<VertexId>> blocks;  // supervertex -> original vertices
  std::vector<EdgeId> edge_source;            // new local edge id -> input local edge id
  std::size_t dropped_self_loops = 0;         // non-A edges that fell inside a block

  std::size_t max_block() const noexcept;
};

// Throws std::out_of_range for unknown edge ids. Duplicate ids are ignored.
std::pair<WeightedMultiGraph, ContractionMap> contract(const WeightedMultiGraph& g,
                                                       std::span<const EdgeId> a);
WeightedMultiGraph delete_edges(const WeightedMultiGraph& g, std::span<const EdgeId> b);

struct Components {
  // Label 0 is the largest component; ties go to the component holding the
  // smaller vertex id.
  std::vector<std::uint32_t> label;
  std::vector<std::size_t> sizes;  // descending
};

Components components(const WeightedMultiGraph& g);
// Components of the subgraph made of the edges with keep[e] != 0.
Components components(const WeightedMultiGraph& g, std::span<const char> keep);

class SpanningTree {
 public:
  SpanningTree() = default;

  // Validates acyclicity, spanning and the n-1 edge count; throws
  // std::invalid_argument otherwise.
  static SpanningTree from_edges(const WeightedMultiGraph& g, std::vector<EdgeId> edges);

  std::size_t num_vertices() const noexcept { return n_; }
  // Sorted local edge ids of the host graph.
  const std::vector<EdgeId>& edges() const noexcept { return edges_; }
  // Rooted at vertex 0; parent[0] == kNoVertex.
  const std::vector<VertexId>& parent() const noexcept { return parent_; }
  const std::vector<EdgeId>& parent_edge() const noexcept { return parent_edge_; }

  std::vector<VertexId> path(VertexId a, VertexId b) const;

  friend bool operator==(const SpanningTree& x, const SpanningTree& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<EdgeId> edges_;
  std::vector<VertexId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<std::uint32_t> depth_;
};

// Hop diameter via two breadth-first sweeps.
std::size_t tree_diameter(const SpanningTree& t);

}  // namespace ustlab
