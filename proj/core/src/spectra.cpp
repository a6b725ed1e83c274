#include "ustlab/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ustlab/generators.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Parallel edges summed per vertex pair. Weights are rescaled by the largest
// edge weight; every quantity computed here is scale invariant.
struct SimpleAdjacency {
  std::vector<std::vector<std::pair<VertexId, double>>> nbrs;
  std::vector<double> strength;
  double total = 0.0;  // sum of strengths (each edge counted twice)
};

SimpleAdjacency simple_adjacency(const WeightedMultiGraph& g, bool unit_weights) {
  const std::size_t n = g.num_vertices();
  SimpleAdjacency adj;
  adj.nbrs.resize(n);
  adj.strength.assign(n, 0.0);
  const double top = g.num_edges() ? g.max_logw() : 0.0;
  std::vector<std::map<VertexId, double>> agg(n);
  for (const Edge& e : g.edges()) {
    const double w = unit_weights ? 1.0 : std::exp(e.logw - top);
    agg[e.u][e.v] += w;
    agg[e.v][e.u] += w;
  }
  for (VertexId x = 0; x < n; ++x) {
    for (auto [y, w] : agg[x]) {
      adj.nbrs[x].emplace_back(y, w);
      adj.strength[x] += w;
    }
    adj.total += adj.strength[x];
  }
  return adj;
}

void require_connected(const WeightedMultiGraph& g) {
  if (g.num_vertices() == 0) throw std::invalid_argument("empty graph");
  if (!g.connected()) throw std::invalid_argument("graph is disconnected");
}

void require_exact_size(const WeightedMultiGraph& g) {
  if (g.num_vertices() > kExactSubsetMaxVertices) {
    throw std::length_error("subset enumeration limited to n <= " +
                            std::to_string(kExactSubsetMaxVertices));
  }
}

// Visits every proper non-empty subset S (as a bitmask) with its cut weight
// and volume, both built incrementally from S minus its lowest vertex.
template <class Visit>
void for_each_cut(const SimpleAdjacency& adj, Visit&& visit) {
  const std::size_t n = adj.nbrs.size();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  std::vector<double> cut(std::size_t{1} << n, 0.0), vol(std::size_t{1} << n, 0.0);
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const unsigned v = static_cast<unsigned>(std::countr_zero(mask));
    const std::uint32_t rest = mask & (mask - 1);
    double into_rest = 0.0;
    for (auto [y, w] : adj.nbrs[v]) {
      if (rest >> y & 1u) into_rest += w;
    }
    cut[mask] = cut[rest] + adj.strength[v] - 2.0 * into_rest;
    vol[mask] = vol[rest] + adj.strength[v];
    visit(mask, cut[mask], vol[mask]);
  }
}

std::vector<VertexId> mask_vertices(std::uint32_t mask) {
  std::vector<VertexId> out;
  for (VertexId x = 0; mask; ++x, mask >>= 1) {
    if (mask & 1u) out.push_back(x);
  }
  return out;
}

bool within_half(double vol_s, double total) { return vol_s <= 0.5 * total * (1.0 + 1e-12); }

struct RitzPair {
  double value = 0.0;
  double residual = 0.0;
  Eigen::VectorXd vector;
};

// Smallest eigenpair of the symmetric operator `apply` on the orthogonal
// complement of the unit vector `null`, by Lanczos with full
// reorthogonalisation.
template <class Apply>
RitzPair lanczos_second(std::size_t n, const Eigen::VectorXd& null, Apply&& apply,
                        std::uint64_t seed) {
  const std::size_t max_steps = std::min<std::size_t>(n - 1, 300);
  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  Rng rng(seed);
  Eigen::VectorXd q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = uniform_open01(rng) - 0.5;
  q -= null.dot(q) * null;
  q.normalize();
  Eigen::VectorXd w(n);
  RitzPair best;
  for (std::size_t k = 0; k < max_steps; ++k) {
    basis.push_back(q);
    apply(q, w);
    alpha.push_back(q.dot(w));
    // The null vector must be projected out in every pass, or rounding lets
    // the zero eigenvalue creep back into the Krylov space.
    for (int pass = 0; pass < 2; ++pass) {
      w -= null.dot(w) * null;
      for (const auto& b : basis) w -= b.dot(w) * b;
    }
    const double b = w.norm();
    const bool last = b <= 1e-12 || k + 1 == max_steps;
    // The tridiagonal solve is cubic in the step count, so test sparingly.
    if (!last && (k + 1) % 10 != 0) {
      beta.push_back(b);
      q = w / b;
      continue;
    }

    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    best.value = eig.eigenvalues()[0];
    best.residual = std::abs(b * eig.eigenvectors()(m - 1, 0));
    const bool done = last || best.residual <= 1e-10 * std::max(1.0, std::abs(best.value));
    if (done) {
      best.vector = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < m; ++i) best.vector += eig.eigenvectors()(i, 0) * basis[i];
      return best;
    }
    beta.push_back(b);
    q = w / b;
  }
  return best;
}

struct SweepResult {
  double ratio = kInf;
};

// Best prefix-or-complement cut along the ordering of `score`.
SweepResult sweep_cut(const SimpleAdjacency& adj, const Eigen::VectorXd& score, bool conductance) {
  const std::size_t n = adj.nbrs.size();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    return score[a] < score[b] || (score[a] == score[b] && a < b);
  });
  std::vector<char> in(n, 0);
  double cut = 0.0, vol = 0.0;
  SweepResult out;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const VertexId v = order[k];
    double into = 0.0;
    for (auto [y, w] : adj.nbrs[v]) {
      if (in[y]) into += w;
    }
    in[v] = 1;
    cut += adj.strength[v] - 2.0 * into;
    vol += adj.strength[v];
    const double size = static_cast<double>(k + 1);
    const double ratio =
        conductance ? std::max(cut, 0.0) / (2.0 * std::min(vol, adj.total - vol))
                    : std::max(cut, 0.0) / std::min(size, static_cast<double>(n) - size);
    out.ratio = std::min(out.ratio, ratio);
  }
  return out;
}

}  // namespace

Stationary stationary(const WeightedMultiGraph& g) {
  require_connected(g);
  const std::size_t n = g.num_vertices();
  Stationary s;
  s.pi.assign(n, 1.0);
  if (n > 1) {
    double top = -kInf;
    for (VertexId x = 0; x < n; ++x) top = std::max(top, g.log_strength(x));
    double acc = 0.0;
    for (VertexId x = 0; x < n; ++x) acc += std::exp(g.log_strength(x) - top);
    const double log_total = top + std::log(acc);
    for (VertexId x = 0; x < n; ++x) s.pi[x] = std::exp(g.log_strength(x) - log_total);
  }
  const auto [lo, hi] = std::minmax_element(s.pi.begin(), s.pi.end());
  s.pi_min = *lo;
  s.pi_max = *hi;
  return s;
}

double iso_constant(const WeightedMultiGraph& g) {
  require_exact_size(g);
  const std::size_t n = g.num_vertices();
  const SimpleAdjacency adj = simple_adjacency(g, true);
  double best = kInf;
  for_each_cut(adj, [&](std::uint32_t mask, double cut, double) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (2 * size <= n) best = std::min(best, cut / static_cast<double>(size));
  });
  return best;
}

BottleneckResult bottleneck_ratio(const WeightedMultiGraph& g) {
  require_exact_size(g);
  require_connected(g);
  const SimpleAdjacency adj = simple_adjacency(g, false);
  BottleneckResult r;
  r.phi = kInf;
  std::uint32_t arg = 0;
  for_each_cut(adj, [&](std::uint32_t mask, double cut, double vol) {
    if (!within_half(vol, adj.total)) return;
    const double phi = cut / (2.0 * vol);
    if (phi < r.phi) {
      r.phi = phi;
      arg = mask;
    }
  });
  r.argmin = mask_vertices(arg);
  return r;
}

Bracket iso_bracket(const WeightedMultiGraph& g, std::size_t exact_limit) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) return {kInf, kInf, true};
  if (n <= std::min(exact_limit, kExactSubsetMaxVertices)) {
    const double h = iso_constant(g);
    return {h, h, true};
  }
  require_connected(g);
  const SimpleAdjacency adj = simple_adjacency(g, true);
  const Eigen::VectorXd null = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    for (VertexId v = 0; v < n; ++v) {
      double s = adj.strength[v] * x[v];
      for (auto [u, w] : adj.nbrs[v]) s -= w * x[u];
      y[v] = s;
    }
  };
  const RitzPair ritz = lanczos_second(n, null, apply, 0x5eed0001ULL + n);
  Bracket b;
  b.lower = std::max(0.0, ritz.value - ritz.residual) / 2.0;
  b.upper = sweep_cut(adj, ritz.vector, false).ratio;
  b.lower = std::min(b.lower, b.upper);
  return b;
}

Bracket bottleneck_bracket(const WeightedMultiGraph& g, std::size_t exact_limit) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) return {kInf, kInf, true};
  if (n <= std::min(exact_limit, kExactSubsetMaxVertices)) {
    const double phi = bottleneck_ratio(g).phi;
    return {phi, phi, true};
  }
  require_connected(g);
  const SimpleAdjacency adj = simple_adjacency(g, false);
  Eigen::VectorXd root(n);
  for (VertexId v = 0; v < n; ++v) root[v] = std::sqrt(adj.strength[v]);
  const Eigen::VectorXd null = root / root.norm();
  // Normalised Laplacian I - D^{-1/2} W D^{-1/2}.
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    for (VertexId v = 0; v < n; ++v) {
      double s = x[v];
      for (auto [u, w] : adj.nbrs[v]) s -= w * x[u] / (root[v] * root[u]);
      y[v] = s;
    }
  };
  const RitzPair ritz = lanczos_second(n, null, apply, 0x5eed0002ULL + n);
  Bracket b;
  // Lazy-walk gap is lambda_2(N)/2, and Phi >= gap/2.
  b.lower = std::max(0.0, ritz.value - ritz.residual) / 4.0;
  Eigen::VectorXd score(n);
  for (VertexId v = 0; v < n; ++v) score[v] = ritz.vector[v] / root[v];
  b.upper = sweep_cut(adj, score, true).ratio;
  b.lower = std::min(b.lower, b.upper);
  return b;
}

double BottleneckProfile::operator()(double r) const {
  if (breakpoints.empty() || r < breakpoints.front().first) return kInf;
  if (r > 0.5) return plateau;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), r,
                             [](double x, const auto& bp) { return x < bp.first; });
  return std::prev(it)->second;
}

BottleneckProfile bottleneck_profile(const WeightedMultiGraph& g) {
  require_exact_size(g);
  require_connected(g);
  const SimpleAdjacency adj = simple_adjacency(g, false);
  std::vector<std::pair<double, double>> points;
  for_each_cut(adj, [&](std::uint32_t, double cut, double vol) {
    if (within_half(vol, adj.total)) points.emplace_back(vol / adj.total, cut / (2.0 * vol));
  });
  std::sort(points.begin(), points.end());
  BottleneckProfile p;
  double running = kInf;
  for (const auto& [r, phi] : points) {
    if (phi < running) {
      running = phi;
      if (!p.breakpoints.empty() && p.breakpoints.back().first == r) {
        p.breakpoints.back().second = phi;
      } else {
        p.breakpoints.emplace_back(r, phi);
      }
    }
  }
  p.plateau = running;
  // The cut sums can differ from pi_min in the last bits; anchor r_0 to it.
  if (!p.breakpoints.empty()) {
    p.breakpoints.front().first = std::min(p.breakpoints.front().first, stationary(g).pi_min);
  }
  return p;
}

Eigen::MatrixXd lazy_kernel_matrix(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kHeatKernelMaxVertices) {
    throw std::length_error("dense heat kernel limited to n <= " +
                            std::to_string(kHeatKernelMaxVertices));
  }
  require_connected(g);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) {
    q(0, 0) = 1.0;
    return q;
  }
  for (VertexId x = 0; x < n; ++x) {
    q(x, x) = 0.5;
    const double ls = g.log_strength(x);
    for (const Incidence& inc : g.incident(x)) {
      q(x, inc.neighbor) += 0.5 * std::exp(g.edge(inc.edge).logw - ls);
    }
  }
  return q;
}

Eigen::MatrixXd heat_kernel(const WeightedMultiGraph& g, std::uint64_t t) {
  Eigen::MatrixXd base = lazy_kernel_matrix(g);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (t > 0) {
    if (t & 1u) out = out * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return out;
}

double uniform_deviation(const Eigen::MatrixXd& q, std::span<const double> pi) {
  double dev = 0.0;
  for (Eigen::Index u = 0; u < q.rows(); ++u) {
    for (Eigen::Index v = 0; v < q.cols(); ++v) {
      dev = std::max(dev, std::abs(q(u, v) / pi[v] - 1.0));
    }
  }
  return dev;
}

namespace {

Eigen::MatrixXd matrix_power(Eigen::MatrixXd base, std::uint64_t t) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (t > 0) {
    if (t & 1u) out = out * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return out;
}

}  // namespace

std::uint64_t mixing_time(const WeightedMultiGraph& g) {
  const Stationary st = stationary(g);
  if (g.num_vertices() == 1) return 0;
  const Eigen::MatrixXd q = lazy_kernel_matrix(g);
  constexpr std::uint64_t kMaxT = std::uint64_t{1} << 50;
  std::uint64_t hi = 1;
  Eigen::MatrixXd q_hi = q;
  Eigen::MatrixXd q_lo = Eigen::MatrixXd::Identity(q.rows(), q.cols());
  std::uint64_t lo = 0;
  while (uniform_deviation(q_hi, st.pi) > 0.5) {
    if (hi >= kMaxT) throw std::runtime_error("mixing time exceeds 2^50 steps");
    q_lo = q_hi;
    lo = hi;
    q_hi = q_hi * q_hi;
    hi *= 2;
  }
  // Invariant: deviation(q^lo) > 1/2 >= deviation(q^hi).
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    Eigen::MatrixXd q_mid = q_lo * matrix_power(q, mid - lo);
    if (uniform_deviation(q_mid, st.pi) > 0.5) {
      lo = mid;
      q_lo = std::move(q_mid);
    } else {
      hi = mid;
    }
  }
  return hi;
}

MnsReport mns_report(const WeightedMultiGraph& g) {
  const Stationary st = stationary(g);
  MnsReport r;
  r.pi_min = st.pi_min;
  r.pi_max = st.pi_max;
  r.d = st.pi_max / st.pi_min;
  r.t_mix = mixing_time(g);
  const std::size_t n = g.num_vertices();
  if (n >= 2) {
    const double a = 0.5 - std::log(static_cast<double>(r.t_mix)) / std::log(static_cast<double>(n));
    if (a > 0.0) r.alpha_star = a;
  }
  // q_t(v,v) from the spectral decomposition of the symmetrised kernel
  // D^{1/2} q D^{-1/2}: q_t(v,v) = sum_k lambda_k^t U(v,k)^2.
  const Eigen::MatrixXd q = lazy_kernel_matrix(g);
  Eigen::VectorXd sq(n);
  for (std::size_t v = 0; v < n; ++v) sq[v] = std::sqrt(st.pi[v]);
  Eigen::MatrixXd sym = sq.asDiagonal() * q * sq.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::MatrixXd u2 = eig.eigenvectors().cwiseAbs2();
  Eigen::VectorXd powers = Eigen::VectorXd::Ones(n);
  double theta = 0.0;
  for (std::uint64_t t = 0; t <= r.t_mix; ++t) {
    const Eigen::VectorXd diag = u2 * powers;
    theta += static_cast<double>(t + 1) * std::min(1.0, diag.maxCoeff());
    powers = powers.cwiseProduct(eig.eigenvalues());
  }
  r.theta = theta;
  return r;
}

double heat_threshold(const BottleneckProfile& profile, double pi_u, double pi_v, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
  const double lo = 4.0 * std::min(pi_u, pi_v);
  const double hi = 4.0 / xi;
  if (lo >= hi || profile.breakpoints.empty()) return 1.0;
  double integral = 0.0;
  const auto& bp = profile.breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const double a = std::max(lo, bp[i].first);
    const double b = std::min(hi, i + 1 < bp.size() ? bp[i + 1].first : kInf);
    if (a < b) integral += 4.0 / (bp[i].second * bp[i].second) * std::log(b / a);
  }
  return 1.0 + integral;
}

HeatCheegerReport heat_cheeger_check(const WeightedMultiGraph& g, std::span<const double> xis) {
  const Stationary st = stationary(g);
  const BottleneckProfile profile = bottleneck_profile(g);
  const std::size_t n = g.num_vertices();
  HeatCheegerReport report;
  std::map<std::uint64_t, Eigen::MatrixXd> kernels;
  const Eigen::MatrixXd q = lazy_kernel_matrix(g);
  for (double xi : xis) {
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = 0; v < n; ++v) {
        const double t_star = heat_threshold(profile, st.pi[u], st.pi[v], xi);
        const double capped = std::min(std::ceil(t_star), 0x1p62);
        const auto t = static_cast<std::uint64_t>(capped);
        auto it = kernels.find(t);
        if (it == kernels.end()) it = kernels.emplace(t, matrix_power(q, t)).first;
        const double dev = std::abs(it->second(u, v) / st.pi[v] - 1.0);
        ++report.checks;
        report.max_ratio = std::max(report.max_ratio, dev / xi);
        report.max_t = std::max(report.max_t, t);
        if (dev > xi) report.violations.push_back({u, v, xi, t, dev});
      }
    }
  }
  return report;
}

BoxIsoReport box_iso_check(std::size_t d, std::size_t half_side, std::size_t samples,
                           std::uint64_t seed) {
  const WeightedMultiGraph g = gen_box(d, half_side);
  const std::size_t n = g.num_vertices();
  BoxIsoReport report;
  report.n = n;
  report.min_slack = kInf;
  const double nd = static_cast<double>(n);
  const double dd = static_cast<double>(d);
  auto check = [&](std::size_t size, std::size_t boundary) {
    const double s = static_cast<double>(size);
    double bound = kInf;
    for (std::size_t r = 1; r <= d; ++r) {
      const double rr = static_cast<double>(r);
      bound = std::min(bound, std::pow(s, 1.0 - 1.0 / rr) * rr * std::pow(nd, 1.0 / rr - 1.0 / dd));
    }
    const double weak = std::pow(s, (dd - 1.0) / dd);
    const double tol = 1e-9 * std::max(1.0, bound);
    const double b = static_cast<double>(boundary);
    ++report.examined;
    report.min_slack = std::min(report.min_slack, b - bound);
    if (b < bound - tol || bound < weak - tol) ++report.violations;
  };

  if (n <= kExactSubsetMaxVertices) {
    report.exhaustive = true;
    const SimpleAdjacency adj = simple_adjacency(g, true);
    for_each_cut(adj, [&](std::uint32_t mask, double cut, double) {
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      if (2 * size <= n) check(size, static_cast<std::size_t>(std::llround(cut)));
    });
    return report;
  }

  Rng rng(seed);
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  std::vector<char> in(n, 0);
  const std::size_t max_size = n / 2;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t size = 1 + static_cast<std::size_t>(uniform_open01(rng) * max_size);
    // Partial Fisher-Yates: perm[0..size) is a uniform subset.
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(uniform_open01(rng) * (n - k));
      std::swap(perm[k], perm[j]);
      in[perm[k]] = 1;
    }
    std::size_t boundary = 0;
    for (std::size_t k = 0; k < size; ++k) {
      for (const Incidence& inc : g.incident(perm[k])) boundary += in[inc.neighbor] ? 0 : 1;
    }
    check(size, boundary);
    for (std::size_t k = 0; k < size; ++k) in[perm[k]] = 0;
  }
  return report;
}

}  // namespace ustlab
