#include "ustlab/edge_list.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ustlab {

namespace {

std::runtime_error parse_error(std::size_t line, const std::string& what) {
  return std::runtime_error("edge list line " + std::to_string(line) + ": " + what);
}

}  // namespace

WeightedMultiGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw parse_error(1, "missing header");
  ++lineno;
  if (!line.empty() && line.back() == '\r') throw parse_error(lineno, "CRLF line endings");

  std::size_t n = 0;
  bool have_n = false;
  bool have_mode = false;
  WeightMode mode = WeightMode::kLinear;
  std::istringstream header(line);
  std::string token;
  while (header >> token) {
    if (token.rfind("n=", 0) == 0) {
      try {
        n = std::stoull(token.substr(2));
      } catch (const std::exception&) {
        throw parse_error(lineno, "bad vertex count '" + token + "'");
      }
      have_n = true;
    } else if (token == "mode=linear") {
      mode = WeightMode::kLinear;
      have_mode = true;
    } else if (token == "mode=log") {
      mode = WeightMode::kLog;
      have_mode = true;
    } else {
      throw parse_error(lineno, "unexpected header token '" + token + "'");
    }
  }
  if (!have_n || !have_mode) throw parse_error(lineno, "header needs n=<count> mode=<linear|log>");

  std::vector<EdgeSpec> specs;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.back() == '\r') throw parse_error(lineno, "CRLF line endings");
    std::istringstream row(line);
    std::string su, sv, sw;
    if (!std::getline(row, su, '\t') || !std::getline(row, sv, '\t') ||
        !std::getline(row, sw, '\t')) {
      throw parse_error(lineno, "expected u<TAB>v<TAB>weight");
    }
    try {
      std::size_t pos = 0;
      const auto u = std::stoull(su, &pos);
      if (pos != su.size()) throw std::invalid_argument(su);
      const auto v = std::stoull(sv, &pos);
      if (pos != sv.size()) throw std::invalid_argument(sv);
      const double w = std::stod(sw, &pos);
      if (pos != sw.size()) throw std::invalid_argument(sw);
      if (u >= n || v >= n) throw parse_error(lineno, "vertex index out of range");
      specs.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
    } catch (const std::invalid_argument&) {
      throw parse_error(lineno, "malformed number");
    } catch (const std::out_of_range&) {
      throw parse_error(lineno, "number out of range");
    }
  }
  return WeightedMultiGraph::build(n, specs, mode);
}

WeightedMultiGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedMultiGraph& g, WeightMode mode) {
  out << "n=" << g.num_vertices() << " mode=" << (mode == WeightMode::kLog ? "log" : "linear")
      << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    const double value = mode == WeightMode::kLog ? e.logw : std::exp(e.logw);
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << e.u << '\t' << e.v << '\t' << buf << '\n';
  }
}

void write_edge_list_file(const std::string& path, const WeightedMultiGraph& g,
                          WeightMode mode) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_edge_list(out, g, mode);
}

}  // namespace ustlab
