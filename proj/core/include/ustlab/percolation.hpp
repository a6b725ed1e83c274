#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ustlab/graph.hpp"
#include "ustlab/spectra.hpp"
#include "ustlab/weights.hpp"

namespace ustlab {

// Edge e is open iff w_e lies in the closed interval [1/A, A].
struct PercolationView {
  double a = 0.0;
  std::vector<char> open;      // per edge
  std::vector<EdgeId> closed;  // K, ascending
  Components clusters;         // of the open subgraph
  double p_hat = 0.0;          // open fraction

  std::size_t num_open() const noexcept { return open.size() - closed.size(); }
};

// Throws std::invalid_argument unless A > 1.
PercolationView threshold(const WeightedMultiGraph& g, double a);

enum class EventMode { kExpander, kLattice };

struct EventOptions {
  EventMode mode = EventMode::kExpander;
  std::size_t dim = 0;        // lattice mode
  std::size_t half_side = 0;  // lattice mode; the graph must be the box [-L, L]^d
  // Giant clusters up to this size get exact isoperimetry.
  std::size_t iso_budget = 20;
  double c0 = 0.1;                // lattice B2 constant
  std::size_t iso_samples = 2000;  // lattice B2 sets examined beyond the budget
  std::uint64_t seed = 0;
};

// Events on the giant open cluster C1 (sizes count vertices):
//   B1  |C1| >= 3n/4
//   B2  expander: h_{C1} >= 1/log n;
//       lattice: |E_{C1}(S, C1 \ S)| >= c0 |S|^{(d-1)/d} for every S in C1
//       with (log n)^{d^2/(d-1)} <= |S| <= |C1|/2
//   B3  components of G \ V(C1) have at most log n vertices
//       (lattice: (log n)^{d/(d-1)})
//   B4  clusters of closed edges have at most log n vertices
struct EventReport {
  EventMode mode = EventMode::kExpander;
  std::size_t dim = 0;
  std::size_t n = 0;
  double c0 = 0.1;
  bool b1 = false, b2 = false, b3 = false, b4 = false;

  std::size_t giant_size = 0;
  Bracket giant_iso;  // expander mode: h_{C1}
  // Expander B2 is decided on the lower end. When the bracket is not exact,
  // "not refuted" (upper >= 1/log n) is the optimistic reading.
  bool b2_not_refuted = false;
  // Lattice mode: min of |E(S, C1 \ S)| / |S|^{(d-1)/d} over the examined S
  // (+inf if none is eligible), the size of that S, and whether every
  // eligible S was examined.
  double lattice_min_ratio = 0.0;
  std::size_t lattice_argmin_size = 0;
  bool lattice_exhaustive = true;

  std::size_t max_outside_component = 0;
  std::size_t max_closed_cluster = 0;

  bool all() const noexcept { return b1 && b2 && b3 && b4; }
  // Flags rederived from the witnesses above.
  EventReport recompute() const;
};

// Throws std::invalid_argument for lattice mode on a graph that is not the
// box [-L, L]^d.
EventReport check_events(const WeightedMultiGraph& g, const PercolationView& view,
                         const EventOptions& options);

struct ConditionedPair {
  WeightedMultiGraph gpp;  // G - (K \ T(K))
  WeightedMultiGraph gp;   // G'' / T(K)
  ContractionMap map;      // G'' -> G'
  std::size_t deleted_edges = 0;
  std::size_t contracted_edges = 0;
  std::size_t dropped_self_loops = 0;
};

// Throws std::invalid_argument unless t is a spanning tree of g.
ConditionedPair condition_on_tree(const WeightedMultiGraph& g, const PercolationView& view,
                                  const SpanningTree& t);

struct SweepRow {
  double a = 0.0;
  double p_hat = 0.0;
  std::size_t n = 0;
  std::size_t trial = 0;
  bool b1 = false, b2 = false, b3 = false, b4 = false;
  bool b2_not_refuted = false;
  std::size_t maxblock = 0;
  std::size_t dropped_self_loops = 0;
};

struct SweepSpec {
  std::function<WeightedMultiGraph(std::uint64_t seed)> make_graph;
  WeightLaw law;
  std::vector<double> a_grid;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  EventOptions events;
  std::size_t threads = 1;
};

// One row per (A, trial). Each trial draws a graph and weights, samples the
// UST and conditions on it, so maxblock and dropped_self_loops describe G'.
std::vector<SweepRow> event_probability_sweep(const SweepSpec& spec);

std::string sweep_csv_header();
std::string to_csv(const SweepRow& row);

}  // namespace ustlab
