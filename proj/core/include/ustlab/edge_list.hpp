#pragma once

#include <iosfwd>
#include <string>

#include "ustlab/graph.hpp"

namespace ustlab {

// Text format:
//   n=<count> mode=<linear|log>
//   u<TAB>v<TAB>weight
// one edge per line, LF endings.
WeightedMultiGraph read_edge_list(std::istream& in);
WeightedMultiGraph read_edge_list_file(const std::string& path);

// Log mode round-trips exactly (17 significant digits).
void write_edge_list(std::ostream& out, const WeightedMultiGraph& g,
                     WeightMode mode = WeightMode::kLog);
void write_edge_list_file(const std::string& path, const WeightedMultiGraph& g,
                          WeightMode mode = WeightMode::kLog);

}  // namespace ustlab
