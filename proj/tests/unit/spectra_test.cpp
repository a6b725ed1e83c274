#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "test_support.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/harness.hpp"
#include "ustlab/spectra.hpp"
#include "ustlab/weights.hpp"

namespace ustlab {
namespace {

using testing::make_graph;

WeightedMultiGraph scaled(const WeightedMultiGraph& g, double c) {
  std::vector<double> lw;
  for (const Edge& e : g.edges()) lw.push_back(e.logw + std::log(c));
  return g.with_log_weights(lw);
}

TEST(StationaryTest, Examples) {
  const auto reg = gen_random_regular(10, 3, 1);
  for (double p : stationary(reg).pi) EXPECT_NEAR(p, 0.1, 1e-15);
  const auto e = make_graph(2, {{0, 1, 9}});
  EXPECT_NEAR(stationary(e).pi[0], 0.5, 1e-15);
  EXPECT_NEAR(stationary(e).pi[1], 0.5, 1e-15);
  const auto star = make_graph(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}});
  const auto s = stationary(star);
  EXPECT_NEAR(s.pi[0], 0.5, 1e-15);
  EXPECT_NEAR(s.pi[3], 1.0 / 6, 1e-15);
  EXPECT_NEAR(s.pi_min, 1.0 / 6, 1e-15);
  EXPECT_THROW(stationary(make_graph(4, {{0, 1, 1}, {2, 3, 1}})), std::invalid_argument);
}

TEST(Iso, Examples) {
  EXPECT_DOUBLE_EQ(iso_constant(gen_complete(4)), 2.0);
  EXPECT_NEAR(iso_constant(testing::cycle_graph(6)), 2.0 / 3, 1e-15);
  EXPECT_DOUBLE_EQ(iso_constant(testing::path_graph(3)), 1.0);
  EXPECT_THROW(iso_constant(gen_complete(21)), std::length_error);
}

TEST(Iso, MatchesBruteForce) {
  for (const auto& g : exact_corpus(30, 12, 3)) {
    ASSERT_NEAR(iso_constant(g), testing::brute_iso(g), 1e-12);
  }
}

TEST(Bottleneck, Examples) {
  EXPECT_NEAR(bottleneck_ratio(make_graph(2, {{0, 1, 1}})).phi, 0.5, 1e-15);
  const auto k4 = bottleneck_ratio(gen_complete(4));
  EXPECT_NEAR(k4.phi, 1.0 / 3, 1e-15);
  EXPECT_EQ(k4.argmin.size(), 2u);
}

// Phi via cut weight over twice the volume, against Phi via the kernel:
// sum_{x in S, y not in S} pi(x) q(x, y) / pi(S).
TEST(Bottleneck, TwoFormulasAgree) {
  for (const auto& g : exact_corpus(30, 10, 4)) {
    const auto r = bottleneck_ratio(g);
    ASSERT_NEAR(r.phi, testing::brute_phi(g), 1e-10);
    const auto q = lazy_kernel_matrix(g);
    const auto pi = stationary(g).pi;
    std::vector<char> in(g.num_vertices(), 0);
    for (VertexId x : r.argmin) in[x] = 1;
    double flow = 0.0, mass = 0.0;
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
      if (!in[x]) continue;
      mass += pi[x];
      for (VertexId y = 0; y < g.num_vertices(); ++y) {
        if (!in[y]) flow += pi[x] * q(x, y);
      }
    }
    ASSERT_NEAR(flow / mass, r.phi, 1e-10);
    ASSERT_LE(mass, 0.5 + 1e-12);
  }
}

TEST(Bottleneck, ScaleInvariance) {
  for (const auto& g : exact_corpus(10, 9, 5)) {
    const double base = bottleneck_ratio(g).phi;
    for (double c : {0.5, 7.0}) EXPECT_NEAR(bottleneck_ratio(scaled(g, c)).phi, base, 1e-9);
  }
}

TEST(Profile, Examples) {
  const auto e = bottleneck_profile(make_graph(2, {{0, 1, 3}}));
  EXPECT_DOUBLE_EQ(e(0.5), 0.5);
  EXPECT_DOUBLE_EQ(e(0.9), 0.5);
  EXPECT_TRUE(std::isinf(e(0.49)));

  const auto k4 = bottleneck_profile(gen_complete(4));
  EXPECT_NEAR(k4(0.25), 0.5, 1e-15);
  EXPECT_NEAR(k4(0.4), 0.5, 1e-15);
  EXPECT_NEAR(k4(0.5), 1.0 / 3, 1e-15);
  EXPECT_NEAR(k4(0.75), 1.0 / 3, 1e-15);
}

TEST(Profile, MatchesBruteForceAndPlateau) {
  for (const auto& g : exact_corpus(15, 9, 6)) {
    const auto p = bottleneck_profile(g);
    const double pi_min = stationary(g).pi_min;
    for (int k = 0; k <= 37; ++k) {
      const double r = pi_min + (0.5 - pi_min) * k / 37;
      ASSERT_NEAR(p(r), testing::brute_phi(g, r), 1e-10) << "r=" << r;
    }
    EXPECT_EQ(p(0.75), p(0.5));
    EXPECT_EQ(p(1.0), p.plateau);
    for (std::size_t i = 1; i < p.breakpoints.size(); ++i) {
      EXPECT_LT(p.breakpoints[i - 1].first, p.breakpoints[i].first);
      EXPECT_LE(p.breakpoints[i].second, p.breakpoints[i - 1].second);
    }
  }
}

TEST(HeatKernel, Examples) {
  const auto g = make_graph(3, {{0, 1, 2}, {1, 2, 1}});
  const auto q0 = heat_kernel(g, 0);
  EXPECT_TRUE(q0.isApprox(Eigen::MatrixXd::Identity(3, 3)));
  const auto e = heat_kernel(make_graph(2, {{0, 1, 4}}), 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(e(i, j), 0.5, 1e-15);
  }
}

TEST(HeatKernel, RowsDiagonalAndSemigroup) {
  for (const auto& g : exact_corpus(10, 10, 7)) {
    const auto q = lazy_kernel_matrix(g);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(q.rows(), q.cols());
    Eigen::VectorXd prev_diag = power.diagonal();
    for (std::uint64_t t = 1; t <= 20; ++t) {
      power = power * q;
      const auto qt = heat_kernel(g, t);
      ASSERT_LT((qt - power).cwiseAbs().maxCoeff(), 1e-12);
      ASSERT_LT((qt.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-10);
      ASSERT_TRUE((qt.diagonal().array() <= prev_diag.array() + 1e-14).all());
      prev_diag = qt.diagonal();
    }
    const auto q7 = heat_kernel(g, 7), q3 = heat_kernel(g, 3), q4 = heat_kernel(g, 4);
    ASSERT_LT((q7 - q3 * q4).cwiseAbs().maxCoeff(), 1e-12);
  }
}

std::uint64_t scan_mixing_time(const WeightedMultiGraph& g) {
  const auto q = lazy_kernel_matrix(g);
  const auto pi = stationary(g).pi;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(q.rows(), q.cols());
  for (std::uint64_t t = 0;; ++t) {
    if (uniform_deviation(power, pi) <= 0.5) return t;
    power = power * q;
  }
}

TEST(Mixing, Examples) {
  EXPECT_EQ(mixing_time(make_graph(2, {{0, 1, 1}})), 1u);
  const auto k4 = mixing_time(gen_complete(4));
  EXPECT_LE(k4, 3u);
  EXPECT_EQ(k4, scan_mixing_time(gen_complete(4)));
}

TEST(Mixing, MatchesScanAndCheeger) {
  for (const auto& g : exact_corpus(30, 12, 8)) {
    const auto t = mixing_time(g);
    ASSERT_EQ(t, scan_mixing_time(g));
    const double phi = bottleneck_ratio(g).phi;
    const double pi_min = stationary(g).pi_min;
    EXPECT_GE(double(t), 1.0 / (4 * phi));
    EXPECT_LE(double(t), 2 * std::log(2 / pi_min) / (phi * phi));
  }
}

TEST(Mns, Examples) {
  const auto reg = mns_report(gen_random_regular(12, 3, 5));
  EXPECT_NEAR(reg.d, 1.0, 1e-12);
  const auto e = mns_report(make_graph(2, {{0, 1, 1}}));
  EXPECT_EQ(e.t_mix, 1u);
  EXPECT_NEAR(e.theta, 2.0, 1e-15);
}

TEST(Mns, ScaleInvariance) {
  for (const auto& g : exact_corpus(10, 10, 9)) {
    const auto base = mns_report(g);
    const auto prof = bottleneck_profile(g);
    for (double c : {0.5, 7.0}) {
      const auto h = scaled(g, c);
      const auto r = mns_report(h);
      EXPECT_NEAR(r.d, base.d, 1e-9);
      EXPECT_EQ(r.t_mix, base.t_mix);
      EXPECT_NEAR(r.theta, base.theta, 1e-9);
      const auto sp = stationary(h).pi;
      const auto bp = stationary(g).pi;
      for (std::size_t i = 0; i < sp.size(); ++i) EXPECT_NEAR(sp[i], bp[i], 1e-9);
      const auto hp = bottleneck_profile(h);
      for (double r2 : {0.1, 0.3, 0.5}) {
        if (std::isinf(prof(r2))) {
          EXPECT_TRUE(std::isinf(hp(r2)));
        } else {
          EXPECT_NEAR(hp(r2), prof(r2), 1e-9);
        }
      }
    }
  }
}

TEST(HeatCheeger, SingleEdge) {
  const auto g = make_graph(2, {{0, 1, 1}});
  const double xi[] = {1.0};
  const auto r = heat_cheeger_check(g, xi);
  EXPECT_EQ(r.checks, 4u);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_NEAR(r.max_ratio, 0.0, 1e-15);
}

TEST(HeatCheeger, ThresholdIntegral) {
  // Constant profile phi on [pi_min, inf): 1 + (4/phi^2) log((4/xi) / (4 pi_min)).
  BottleneckProfile p;
  p.breakpoints = {{0.1, 0.4}};
  p.plateau = 0.4;
  const double expect = 1.0 + 4.0 / 0.16 * std::log((4.0 / 0.5) / (4 * 0.1));
  EXPECT_NEAR(heat_threshold(p, 0.1, 0.2, 0.5), expect, 1e-9);
}

TEST(HeatCheeger, CorpusHoldsUp) {
  const double xis[] = {0.1, 0.5, 1.0};
  for (const auto& g : exact_corpus(20, 9, 10)) {
    const auto r = heat_cheeger_check(g, xis);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_LE(r.max_ratio, 1.0);
  }
}

TEST(Brackets, ContainExactValues) {
  for (const auto& g : exact_corpus(30, 16, 11)) {
    const double h = iso_constant(g);
    const double phi = bottleneck_ratio(g).phi;
    const auto hb = iso_bracket(g, 0);
    const auto pb = bottleneck_bracket(g, 0);
    EXPECT_FALSE(hb.exact);
    EXPECT_LE(hb.lower, h + 1e-9);
    EXPECT_GE(hb.upper, h - 1e-9);
    EXPECT_LE(pb.lower, phi + 1e-9);
    EXPECT_GE(pb.upper, phi - 1e-9);
    const auto exact = iso_bracket(g);
    EXPECT_TRUE(exact.exact);
    EXPECT_EQ(exact.lower, h);
  }
}

TEST(Brackets, CycleSpectrum) {
  // lambda_2 of C_n is 2 - 2 cos(2 pi / n); h(C_n) = 2 / floor(n/2).
  const std::size_t n = 400;
  const auto g = testing::cycle_graph(n);
  const auto b = iso_bracket(g, 0);
  EXPECT_NEAR(b.lower, (2 - 2 * std::cos(2 * M_PI / n)) / 2, 1e-6);
  EXPECT_NEAR(b.upper, 2.0 / 200, 1e-12);
}

TEST(BoxIso, Examples) {
  const auto small = box_iso_check(2, 1, 0, 1);
  EXPECT_TRUE(small.exhaustive);
  EXPECT_EQ(small.violations, 0u);
  std::size_t expect = 0;
  for (int k = 1; k <= 4; ++k) {
    std::size_t c = 1;
    for (int i = 0; i < k; ++i) c = c * (9 - i) / (i + 1);
    expect += c;
  }
  EXPECT_EQ(small.examined, expect);
  const auto path = box_iso_check(1, 1, 0, 1);
  EXPECT_EQ(path.violations, 0u);
  const auto big = box_iso_check(2, 2, 20000, 3);
  EXPECT_FALSE(big.exhaustive);
  EXPECT_EQ(big.examined, 20000u);
  EXPECT_EQ(big.violations, 0u);
  EXPECT_GE(big.min_slack, 0.0);
}

}  // namespace
}  // namespace ustlab
