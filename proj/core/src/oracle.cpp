#include "ustlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>

#include "ustlab/union_find.hpp"

namespace ustlab {

namespace {

// Union-find without path compression so unions can be undone in LIFO order.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(std::uint32_t x, std::uint32_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (size_[x] < size_[y]) std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    history_.push_back(y);
    return true;
  }
  void undo() {
    const std::uint32_t y = history_.back();
    history_.pop_back();
    const std::uint32_t x = parent_[y];
    size_[x] -= size_[y];
    parent_[y] = y;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> history_;
};

class TreeEnumerator {
 public:
  explicit TreeEnumerator(const WeightedMultiGraph& g) : g_(g), uf_(g.num_vertices()) {}

  std::vector<SpanningTree> run() {
    if (g_.num_vertices() == 1) {
      out_.push_back(SpanningTree::from_edges(g_, {}));
      return std::move(out_);
    }
    if (!g_.connected()) return {};
    recurse(0);
    return std::move(out_);
  }

 private:
  // Chosen forest plus the still-undecided edges from `from` on must connect G.
  bool still_connectable(EdgeId from) const {
    UnionFind uf(g_.num_vertices());
    for (EdgeId e : chosen_) uf.unite(g_.edge(e).u, g_.edge(e).v);
    for (EdgeId e = from; e < g_.num_edges(); ++e) uf.unite(g_.edge(e).u, g_.edge(e).v);
    return uf.num_sets() == 1;
  }

  void recurse(EdgeId i) {
    const std::size_t need = g_.num_vertices() - 1;
    if (chosen_.size() == need) {
      out_.push_back(SpanningTree::from_edges(g_, chosen_));
      return;
    }
    if (i >= g_.num_edges() || chosen_.size() + (g_.num_edges() - i) < need) return;
    const Edge& e = g_.edge(i);
    if (uf_.unite(e.u, e.v)) {
      chosen_.push_back(i);
      recurse(i + 1);
      chosen_.pop_back();
      uf_.undo();
    }
    if (still_connectable(i + 1)) recurse(i + 1);
  }

  const WeightedMultiGraph& g_;
  RollbackUnionFind uf_;
  std::vector<EdgeId> chosen_;
  std::vector<SpanningTree> out_;
};

void require_connected(const WeightedMultiGraph& g) {
  if (!g.connected()) throw std::invalid_argument("graph is disconnected (Z = 0)");
}

}  // namespace

std::int64_t spanning_tree_count_exact(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) return 1;
  const std::size_t k = n - 1;
  std::vector<__int128> a(k * k, 0);
  for (const Edge& e : g.edges()) {
    // Row/column 0 of the Laplacian is removed.
    if (e.u > 0) a[(e.u - 1) * k + (e.u - 1)] += 1;
    if (e.v > 0) a[(e.v - 1) * k + (e.v - 1)] += 1;
    if (e.u > 0 && e.v > 0) {
      a[(e.u - 1) * k + (e.v - 1)] -= 1;
      a[(e.v - 1) * k + (e.u - 1)] -= 1;
    }
  }
  constexpr __int128 kLimit = static_cast<__int128>(1) << 62;
  auto checked = [&](__int128 x) {
    if (x > kLimit || x < -kLimit) throw std::overflow_error("spanning-tree count overflow");
    return x;
  };
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t p = 0; p < k; ++p) {
    if (a[p * k + p] == 0) {
      std::size_t r = p + 1;
      while (r < k && a[r * k + p] == 0) ++r;
      if (r == k) return 0;
      for (std::size_t c = 0; c < k; ++c) std::swap(a[p * k + c], a[r * k + c]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) {
        a[i * k + j] = checked((a[i * k + j] * a[p * k + p] - a[i * k + p] * a[p * k + j]) / prev);
      }
    }
    prev = a[p * k + p];
  }
  return static_cast<std::int64_t>(sign * a[(k - 1) * k + (k - 1)]);
}

MatrixTreeResult matrix_tree_z(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw std::invalid_argument("empty graph");
  if (g.num_edges() > 0 && g.max_logw() >= kLinearLogWeightLimit) {
    throw std::domain_error(
        "weights too large for the determinant route (log-weight >= 700); "
        "use exact_law, which enumerates trees in the log domain");
  }
  require_connected(g);
  if (n == 1) return {1.0, 0.0};
  const Eigen::Index k = static_cast<Eigen::Index>(n - 1);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(k, k);
  for (const Edge& e : g.edges()) {
    const double w = std::exp(e.logw);
    const Eigen::Index u = static_cast<Eigen::Index>(e.u) - 1;
    const Eigen::Index v = static_cast<Eigen::Index>(e.v) - 1;
    if (u >= 0) lap(u, u) += w;
    if (v >= 0) lap(v, v) += w;
    if (u >= 0 && v >= 0) {
      lap(u, v) -= w;
      lap(v, u) -= w;
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lap);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double log_abs = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double d = packed(i, i);
    if (d < 0) sign = -sign;
    log_abs += std::log(std::abs(d));
  }
  if (!(sign > 0) || !std::isfinite(log_abs)) {
    throw std::runtime_error("reduced Laplacian determinant is not positive");
  }
  return {std::exp(log_abs), log_abs};
}

std::vector<SpanningTree> enumerate_trees(const WeightedMultiGraph& g) {
  if (g.num_vertices() == 0) throw std::invalid_argument("empty graph");
  if (g.num_vertices() > kEnumerationMaxVertices) {
    throw std::length_error("tree enumeration limited to n <= " +
                            std::to_string(kEnumerationMaxVertices));
  }
  double count = 0.0;
  try {
    count = static_cast<double>(spanning_tree_count_exact(g));
  } catch (const std::overflow_error&) {
    count = std::numeric_limits<double>::infinity();
  }
  if (count > kEnumerationMaxTrees) {
    throw std::length_error("graph has too many spanning trees to enumerate");
  }
  return TreeEnumerator(g).run();
}

std::size_t ExactLaw::index_of(const std::vector<EdgeId>& edges) const {
  auto it = index_.find(edges);
  return it == index_.end() ? trees.size() : it->second;
}

ExactLaw exact_law(const WeightedMultiGraph& g) {
  ExactLaw law;
  law.trees = enumerate_trees(g);
  if (law.trees.empty()) throw std::invalid_argument("graph is disconnected (Z = 0)");
  std::vector<double> logp(law.trees.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < law.trees.size(); ++i) {
    double s = 0.0;
    for (EdgeId e : law.trees[i].edges()) s += g.edge(e).logw;
    logp[i] = s;
    top = std::max(top, s);
  }
  double acc = 0.0;
  for (double x : logp) acc += std::exp(x - top);
  law.log_z = top + std::log(acc);
  law.z = std::exp(law.log_z);
  law.prob.resize(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) {
    law.prob[i] = std::exp(logp[i] - law.log_z);
    law.index_.emplace(law.trees[i].edges(), i);
  }
  return law;
}

double edge_marginal(const WeightedMultiGraph& g, EdgeId e) {
  if (e >= g.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(e));
  const MatrixTreeResult whole = matrix_tree_z(g);
  const EdgeId ids[] = {e};
  const auto [quotient, map] = contract(g, ids);
  (void)map;
  const MatrixTreeResult part = matrix_tree_z(quotient);
  return std::min(1.0, std::exp(g.edge(e).logw + part.log_z - whole.log_z));
}

SpatialMarkovReport check_spatial_markov(const WeightedMultiGraph& g, std::span<const EdgeId> a,
                                         std::span<const EdgeId> b) {
  std::vector<char> in_a(g.num_edges(), 0), in_b(g.num_edges(), 0);
  for (EdgeId e : a) {
    if (e >= g.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(e));
    in_a[e] = 1;
  }
  for (EdgeId e : b) {
    if (e >= g.num_edges()) throw std::out_of_range("unknown edge id " + std::to_string(e));
    if (in_a[e]) throw std::invalid_argument("A and B must be disjoint");
    in_b[e] = 1;
  }

  auto origins_of = [](const WeightedMultiGraph& h, const std::vector<EdgeId>& local,
                       std::span<const EdgeId> extra_origins) {
    std::vector<EdgeId> o;
    o.reserve(local.size() + extra_origins.size());
    for (EdgeId e : local) o.push_back(h.edge(e).origin);
    o.insert(o.end(), extra_origins.begin(), extra_origins.end());
    std::sort(o.begin(), o.end());
    return o;
  };

  const ExactLaw full = exact_law(g);
  std::map<std::vector<EdgeId>, double> lhs;
  double cond = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto& edges = full.trees[i].edges();
    std::size_t hits_a = 0;
    bool touches_b = false;
    for (EdgeId e : edges) {
      hits_a += in_a[e];
      touches_b |= in_b[e] != 0;
    }
    if (hits_a == a.size() && !touches_b) {
      cond += full.prob[i];
      lhs[origins_of(g, edges, {})] += full.prob[i];
    }
  }
  if (lhs.empty() || !(cond > 0.0)) {
    throw std::invalid_argument("conditioning event has probability zero");
  }
  for (auto& [key, p] : lhs) p /= cond;

  // (G - B)/A, with A located in G - B through edge origins.
  const WeightedMultiGraph deleted = delete_edges(g, b);
  std::unordered_map<EdgeId, EdgeId> local_of_origin;
  for (EdgeId e = 0; e < deleted.num_edges(); ++e) local_of_origin[deleted.edge(e).origin] = e;
  std::vector<EdgeId> a_local;
  std::vector<EdgeId> a_origins;
  for (EdgeId e : a) {
    a_local.push_back(local_of_origin.at(g.edge(e).origin));
    a_origins.push_back(g.edge(e).origin);
  }
  const auto [quotient, map] = contract(deleted, a_local);
  (void)map;
  const ExactLaw reduced = exact_law(quotient);
  std::map<std::vector<EdgeId>, double> rhs;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    rhs[origins_of(quotient, reduced.trees[i].edges(), a_origins)] += reduced.prob[i];
  }

  SpatialMarkovReport report;
  report.conditioning_probability = cond;
  double dev = 0.0;
  for (const auto& [key, p] : lhs) {
    auto it = rhs.find(key);
    dev = std::max(dev, std::abs(p - (it == rhs.end() ? 0.0 : it->second)));
  }
  for (const auto& [key, p] : rhs) {
    if (!lhs.count(key)) dev = std::max(dev, p);
  }
  report.max_abs_deviation = dev;
  report.support_size = lhs.size();
  return report;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double tv_distance(std::span<const std::uint64_t> counts, const ExactLaw& law) {
  if (counts.size() != law.size() && counts.size() != law.size() + 1) {
    throw std::invalid_argument("counts must be indexed by the law's trees");
  }
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) throw std::invalid_argument("no samples");
  std::vector<double> emp(counts.size()), ref(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) emp[i] = static_cast<double>(counts[i]) / total;
  std::copy(law.prob.begin(), law.prob.end(), ref.begin());
  return tv_distance(emp, ref);
}

double gap_law(std::size_t m, double t) {
  if (m < 2) throw std::invalid_argument("gap law needs m >= 2");
  if (!(t >= 0.0)) throw std::out_of_range("gap law needs t >= 0");
  // m points cannot keep gaps above 1/(m-1) inside the unit interval.
  if (t >= 1.0 / static_cast<double>(m - 1)) return 0.0;
  return std::pow(1.0 - static_cast<double>(m - 1) * t, static_cast<double>(m));
}

}  // namespace ustlab
