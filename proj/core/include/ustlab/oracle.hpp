#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ustlab/graph.hpp"

namespace ustlab {

inline constexpr std::size_t kEnumerationMaxVertices = 10;
// Second guard on enumeration: the spanning-tree count itself.
inline constexpr double kEnumerationMaxTrees = 5e6;

// All spanning trees, each exactly once (parallel edges distinguished).
// Throws std::length_error beyond the size guards.
std::vector<SpanningTree> enumerate_trees(const WeightedMultiGraph& g);

struct MatrixTreeResult {
  double z = 0.0;      // may overflow to inf; log_z stays finite
  double log_z = 0.0;
};

// Weighted matrix-tree theorem: Z = det of the reduced weighted Laplacian.
// Throws std::domain_error if some log-weight is >= 700 and
// std::invalid_argument for a disconnected graph.
MatrixTreeResult matrix_tree_z(const WeightedMultiGraph& g);

// Spanning-tree count by fraction-free (Bareiss) elimination over integers,
// treating every edge as weight 1. Throws std::overflow_error if the
// intermediates leave 64-bit range.
std::int64_t spanning_tree_count_exact(const WeightedMultiGraph& g);

class ExactLaw {
 public:
  std::vector<SpanningTree> trees;
  std::vector<double> prob;
  double z = 0.0;
  double log_z = 0.0;

  std::size_t size() const noexcept { return trees.size(); }
  // Index of the tree with the given sorted local edge ids, or size() if absent.
  std::size_t index_of(const std::vector<EdgeId>& edges) const;

 private:
  friend ExactLaw exact_law(const WeightedMultiGraph& g);
  std::map<std::vector<EdgeId>, std::size_t> index_;
};

ExactLaw exact_law(const WeightedMultiGraph& g);

// P(e in T) = w_e Z(G/e) / Z(G).
double edge_marginal(const WeightedMultiGraph& g, EdgeId e);

struct SpatialMarkovReport {
  double conditioning_probability = 0.0;
  double max_abs_deviation = 0.0;
  std::size_t support_size = 0;
};

// Compares the law of the UST conditioned on A in T and B disjoint from T
// with the UST of (G - B)/A lifted back by adding A. Trees are compared by
// their origin edge ids. Throws std::invalid_argument if A and B intersect or
// the conditioning event has probability zero.
SpatialMarkovReport check_spatial_markov(const WeightedMultiGraph& g, std::span<const EdgeId> a,
                                         std::span<const EdgeId> b);

// 1/2 sum |p - q| over a common index set.
double tv_distance(std::span<const double> p, std::span<const double> q);
// counts has one entry per tree of `law`, optionally followed by one entry
// counting draws that fell outside the law's support.
double tv_distance(std::span<const std::uint64_t> counts, const ExactLaw& law);

// P(min_{i != j} |U_i - U_j| > t) = (1 - (m-1) t)^m for m i.i.d. uniforms,
// and 0 once t >= 1/(m-1).
double gap_law(std::size_t m, double t);

}  // namespace ustlab
