#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

// One row of the lazy walk: hold with probability 1/2, otherwise move to a
// neighbour with probability proportional to the summed weight of the
// parallel edges joining them.
struct LazyKernelRow {
  VertexId vertex = 0;
  double hold = 0.5;
  std::vector<std::pair<VertexId, double>> moves;  // sorted by neighbour
};

// Throws std::invalid_argument for an isolated vertex.
LazyKernelRow lazy_kernel_row(const WeightedMultiGraph& g, VertexId x);

struct LoopErasedPath {
  std::vector<VertexId> vertices;
  std::size_t walk_length = 0;
};

// Chronological loop erasure.
LoopErasedPath loop_erase(std::span<const VertexId> walk);

enum class SamplerAlgorithm {
  kAuto,          // Wilson unless the weight range would trap the walk
  kWilson,        // loop-erased walks, rooted at vertex 0
  kAldousBroder,  // first-entrance tree of a covering walk; cross-check only
  kSequential,    // edge-by-edge marginals via Kron reduction
};

const char* to_string(SamplerAlgorithm a);

// Above this spread max(log w) - min(log w), kAuto switches from Wilson to
// the sequential sampler, whose cost grows like m n^3.
inline constexpr double kWilsonLogWeightSpread = 20.0;
inline constexpr std::size_t kSequentialMaxVertices = 512;

struct SamplerOptions {
  SamplerAlgorithm algorithm = SamplerAlgorithm::kAuto;
  // Wilson only: receives every loop-erased branch, from its start vertex to
  // the vertex where it joined the tree.
  std::function<void(std::span<const VertexId>)> on_branch;
};

// Draws spanning trees with P(T) proportional to the product of edge weights.
// Precomputes per-vertex transition tables once, so repeated draws on one
// graph are cheap.
class UstSampler {
 public:
  // Throws std::invalid_argument for a disconnected graph and
  // std::domain_error when no algorithm can handle the weight range.
  explicit UstSampler(const WeightedMultiGraph& g, SamplerOptions options = {});

  SpanningTree operator()(Rng& rng) const;
  SamplerAlgorithm algorithm() const noexcept { return algorithm_; }

 private:
  EdgeId step(VertexId x, Rng& rng) const;
  SpanningTree wilson(Rng& rng) const;
  SpanningTree aldous_broder(Rng& rng) const;
  SpanningTree sequential(Rng& rng) const;

  const WeightedMultiGraph* g_;
  SamplerOptions options_;
  SamplerAlgorithm algorithm_;
  std::vector<double> cumulative_;  // aligned with the incidence lists
  std::vector<std::size_t> offsets_;
  std::vector<EdgeId> descending_;  // edges by decreasing log-weight
};

SpanningTree sample_ust(const WeightedMultiGraph& g, std::uint64_t seed,
                        const SamplerOptions& options = {});

// Minimum spanning tree under keys[e]; ties broken by edge id.
SpanningTree kruskal_min_tree(const WeightedMultiGraph& g, std::span<const double> keys);

}  // namespace ustlab
