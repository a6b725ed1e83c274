#include "ustlab/generators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "ustlab/rng.hpp"

namespace ustlab {

namespace {

std::size_t box_volume(std::size_t d, std::size_t half_side) {
  const std::size_t side = 2 * half_side + 1;
  std::size_t n = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (n > (kNoVertex - 1) / side) {
      throw std::overflow_error("box volume (2L+1)^d exceeds vertex capacity");
    }
    n *= side;
  }
  return n;
}

std::vector<std::pair<VertexId, VertexId>> sorted_pairs(const WeightedMultiGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> p;
  p.reserve(g.num_edges());
  for (const Edge& e : g.edges()) p.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(p.begin(), p.end());
  return p;
}

}  // namespace

WeightedMultiGraph gen_random_regular(std::size_t n, std::size_t deg, std::uint64_t seed,
                                      std::size_t max_attempts) {
  if (deg < 3) throw std::invalid_argument("degree must be at least 3");
  if ((n * deg) % 2 != 0) throw std::invalid_argument("n * deg must be even");
  if (deg >= n) throw std::invalid_argument("degree must be smaller than n");

  Rng rng(seed);
  std::vector<VertexId> stubs(n * deg);
  for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = static_cast<VertexId>(i / deg);
  std::vector<EdgeSpec> specs(stubs.size() / 2);
  std::vector<std::pair<VertexId, VertexId>> pairs(specs.size());

  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    bool simple = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      VertexId u = stubs[2 * i], v = stubs[2 * i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      pairs[i] = {std::min(u, v), std::max(u, v)};
    }
    if (!simple) continue;
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;

    for (std::size_t i = 0; i < sorted.size(); ++i) {
      specs[i] = {sorted[i].first, sorted[i].second, 0.0};
    }
    auto g = WeightedMultiGraph::build(n, specs, WeightMode::kLog);
    if (g.connected()) return g;
  }
  throw std::runtime_error("random regular graph: exceeded " + std::to_string(max_attempts) +
                           " rejection attempts");
}

WeightedMultiGraph gen_box(std::size_t d, std::size_t half_side) {
  if (d < 1) throw std::invalid_argument("box dimension must be at least 1");
  if (half_side < 1) throw std::invalid_argument("box half-side must be at least 1");
  const std::size_t n = box_volume(d, half_side);
  const std::size_t side = 2 * half_side + 1;
  std::vector<EdgeSpec> specs;
  specs.reserve(d * (n - n / side));
  for (std::size_t x = 0; x < n; ++x) {
    // stride of coordinate k (k = 0 most significant) is side^(d-1-k)
    std::size_t stride = 1;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t coord = (x / stride) % side;
      if (coord + 1 < side) {
        specs.push_back({static_cast<VertexId>(x), static_cast<VertexId>(x + stride), 0.0});
      }
      stride *= side;
    }
  }
  std::sort(specs.begin(), specs.end(), [](const EdgeSpec& p, const EdgeSpec& q) {
    return std::pair{p.u, p.v} < std::pair{q.u, q.v};
  });
  return WeightedMultiGraph::build(n, specs, WeightMode::kLog);
}

std::vector<int> box_coordinates(std::size_t d, std::size_t half_side, VertexId x) {
  const std::size_t side = 2 * half_side + 1;
  std::vector<int> c(d);
  std::size_t rest = x;
  for (std::size_t k = d; k-- > 0;) {
    c[k] = static_cast<int>(rest % side) - static_cast<int>(half_side);
    rest /= side;
  }
  return c;
}

bool is_box(const WeightedMultiGraph& g, std::size_t d, std::size_t half_side) {
  if (d < 1 || half_side < 1) return false;
  std::size_t n = 0;
  try {
    n = box_volume(d, half_side);
  } catch (const std::overflow_error&) {
    return false;
  }
  if (g.num_vertices() != n) return false;
  const auto box = gen_box(d, half_side);
  if (box.num_edges() != g.num_edges()) return false;
  return sorted_pairs(box) == sorted_pairs(g);
}

WeightedMultiGraph gen_complete(std::size_t n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<EdgeSpec> specs;
  specs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      specs.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), 0.0});
    }
  }
  return WeightedMultiGraph::build(n, specs, WeightMode::kLog);
}

}  // namespace ustlab
