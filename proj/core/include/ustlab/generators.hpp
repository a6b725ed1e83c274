#pragma once

#include <cstdint>
#include <vector>

#include "ustlab/graph.hpp"

namespace ustlab {

// Uniform simple deg-regular graph by the configuration model with rejection
// (pairings with loops or multi-edges, and disconnected outcomes, are redrawn).
// Exact but only practical for small degrees; throws std::runtime_error after
// max_attempts rejections.
WeightedMultiGraph gen_random_regular(std::size_t n, std::size_t deg, std::uint64_t seed,
                                      std::size_t max_attempts = 100000);

// Nearest-neighbour graph on [-L, L]^d. Vertex index is the lexicographic
// rank of the coordinate vector (first coordinate most significant).
WeightedMultiGraph gen_box(std::size_t d, std::size_t half_side);
std::vector<int> box_coordinates(std::size_t d, std::size_t half_side, VertexId x);
// True when g has exactly the vertex and edge set of gen_box(d, half_side).
bool is_box(const WeightedMultiGraph& g, std::size_t d, std::size_t half_side);

WeightedMultiGraph gen_complete(std::size_t n);

}  // namespace ustlab
