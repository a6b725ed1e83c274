#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ustlab/graph.hpp"

namespace ustlab {

// Subset enumeration (2^n cuts) is exact up to this many vertices.
inline constexpr std::size_t kExactSubsetMaxVertices = 20;
// Dense heat-kernel powering guard.
inline constexpr std::size_t kHeatKernelMaxVertices = 4000;

struct Stationary {
  std::vector<double> pi;
  double pi_min = 0.0;
  double pi_max = 0.0;
};

// pi(x) = strength(x) / total strength. Throws std::invalid_argument for a
// disconnected graph.
Stationary stationary(const WeightedMultiGraph& g);

// Exact unweighted isoperimetric constant min_{1 <= |S| <= n/2} |E(S,S^c)|/|S|.
// Throws std::length_error above kExactSubsetMaxVertices.
double iso_constant(const WeightedMultiGraph& g);

struct BottleneckResult {
  double phi = 0.0;
  std::vector<VertexId> argmin;  // sorted
};

// Exact bottleneck ratio by subset enumeration. Throws std::length_error
// above kExactSubsetMaxVertices.
BottleneckResult bottleneck_ratio(const WeightedMultiGraph& g);

// Interval known to contain the true value. `exact` means lower == upper came
// from enumeration; otherwise lower is a Cheeger-type spectral bound and upper
// is the best sweep cut along the approximate second eigenvector.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

// h_G. Exact up to exact_limit vertices; beyond, lower = lambda_2(L)/2 for
// the combinatorial Laplacian L.
Bracket iso_bracket(const WeightedMultiGraph& g, std::size_t exact_limit = kExactSubsetMaxVertices);
// Phi. Exact up to exact_limit vertices; beyond, lower = gamma/2 where gamma
// is the spectral gap of the lazy walk.
Bracket bottleneck_bracket(const WeightedMultiGraph& g,
                           std::size_t exact_limit = kExactSubsetMaxVertices);

// Step function r -> Phi(r). breakpoints[i] = (r_i, phi_i) means Phi(r) = phi_i
// on [r_i, r_{i+1}); r_0 = pi_min and phi is non-increasing. Above 1/2 the
// value is the plateau Phi(1/2).
struct BottleneckProfile {
  std::vector<std::pair<double, double>> breakpoints;
  double plateau = 0.0;

  // +inf below pi_min.
  double operator()(double r) const;
};

BottleneckProfile bottleneck_profile(const WeightedMultiGraph& g);

// Lazy walk kernel q with parallel edges aggregated.
Eigen::MatrixXd lazy_kernel_matrix(const WeightedMultiGraph& g);
// q_t by repeated squaring. Throws std::length_error above kHeatKernelMaxVertices.
Eigen::MatrixXd heat_kernel(const WeightedMultiGraph& g, std::uint64_t t);
// max_{u,v} |q(u,v)/pi(v) - 1|
double uniform_deviation(const Eigen::MatrixXd& q, std::span<const double> pi);

// Smallest t with uniform deviation <= 1/2 (doubling, then bisection).
std::uint64_t mixing_time(const WeightedMultiGraph& g);

struct MnsReport {
  double d = 1.0;  // pi_max / pi_min
  std::uint64_t t_mix = 0;
  std::optional<double> alpha_star;  // largest alpha > 0 with t_mix <= n^(1/2 - alpha)
  double theta = 0.0;                // sum_{t=0}^{t_mix} (t+1) max_v q_t(v,v)
  double pi_min = 0.0;
  double pi_max = 0.0;
};

MnsReport mns_report(const WeightedMultiGraph& g);

struct HeatCheegerViolation {
  VertexId u = 0;
  VertexId v = 0;
  double xi = 0.0;
  std::uint64_t t = 0;
  double deviation = 0.0;
};

struct HeatCheegerReport {
  std::size_t checks = 0;
  double max_ratio = 0.0;  // max deviation / xi over all checks
  std::uint64_t max_t = 0;
  std::vector<HeatCheegerViolation> violations;
};

// 1 + integral_{4 min(pi_u, pi_v)}^{4/xi} 4 / (r Phi(r)^2) dr, summed exactly
// over the profile's pieces.
double heat_threshold(const BottleneckProfile& profile, double pi_u, double pi_v, double xi);

// For every (u, v, xi): evaluates q_t at t = ceil(threshold) and checks
// |q_t(u,v)/pi(v) - 1| <= xi.
HeatCheegerReport heat_cheeger_check(const WeightedMultiGraph& g, std::span<const double> xis);

struct BoxIsoReport {
  std::size_t n = 0;
  std::size_t examined = 0;
  bool exhaustive = false;
  std::size_t violations = 0;
  double min_slack = 0.0;  // min over examined S of |boundary| - bound
};

// Checks |boundary_E S| >= min_r |S|^{1-1/r} r n^{1/r-1/d} >= |S|^{(d-1)/d}
// for subsets with 1 <= |S| <= n/2: all of them when n <= 20, otherwise
// `samples` draws (uniform size, then a uniform subset of that size).
BoxIsoReport box_iso_check(std::size_t d, std::size_t half_side, std::size_t samples,
                           std::uint64_t seed);

}  // namespace ustlab
