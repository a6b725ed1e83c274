#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "test_support.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/harness.hpp"
#include "ustlab/oracle.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/weights.hpp"

namespace ustlab {
namespace {

using testing::make_graph;

TEST(LazyKernel, Examples) {
  const auto g = make_graph(3, {{0, 1, 2}, {0, 2, 1}});
  const auto row = lazy_kernel_row(g, 0);
  EXPECT_DOUBLE_EQ(row.hold, 0.5);
  ASSERT_EQ(row.moves.size(), 2u);
  EXPECT_NEAR(row.moves[0].second, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(row.moves[1].second, 1.0 / 6.0, 1e-15);

  const auto e = make_graph(2, {{0, 1, 17}});
  EXPECT_NEAR(lazy_kernel_row(e, 1).moves.at(0).second, 0.5, 1e-15);
}

TEST(LazyKernel, ExtremeLogWeights) {
  const EdgeSpec s[] = {{0, 1, 1000.0}, {0, 2, 0.0}};
  const auto g = WeightedMultiGraph::build(3, s, WeightMode::kLog);
  const auto row = lazy_kernel_row(g, 0);
  EXPECT_NEAR(row.moves[0].second, 0.5, 1e-300);
  EXPECT_LT(row.moves[1].second, 1e-300);
}

TEST(LazyKernel, ParallelEdgesAggregate) {
  const auto g = make_graph(3, {{0, 1, 1}, {0, 1, 2}, {0, 2, 1}});
  const auto row = lazy_kernel_row(g, 0);
  ASSERT_EQ(row.moves.size(), 2u);
  EXPECT_NEAR(row.moves[0].second, 0.375, 1e-15);
  EXPECT_NEAR(row.moves[1].second, 0.125, 1e-15);
  const auto iso = make_graph(3, {{0, 1, 1}});
  EXPECT_THROW(lazy_kernel_row(iso, 2), std::invalid_argument);
}

TEST(LoopErase, Examples) {
  const VertexId w1[] = {0, 1, 0, 2};
  EXPECT_EQ(loop_erase(w1).vertices, (std::vector<VertexId>{0, 2}));
  const VertexId w2[] = {0, 1, 2};
  EXPECT_EQ(loop_erase(w2).vertices, (std::vector<VertexId>{0, 1, 2}));
  // a,b,c,b,d,a,e
  const VertexId w3[] = {0, 1, 2, 1, 3, 0, 4};
  const auto p = loop_erase(w3);
  EXPECT_EQ(p.vertices, (std::vector<VertexId>{0, 4}));
  EXPECT_EQ(p.walk_length, 7u);
}

std::vector<std::uint64_t> histogram(const WeightedMultiGraph& g, const ExactLaw& law,
                                     SamplerAlgorithm algo, std::size_t samples,
                                     std::uint64_t seed) {
  UstSampler sampler(g, {algo, {}});
  Rng rng(seed);
  std::vector<std::uint64_t> counts(law.size() + 1, 0);
  for (std::size_t i = 0; i < samples; ++i) ++counts[law.index_of(sampler(rng).edges())];
  return counts;
}

TEST(Sampler, ForcedTree) {
  const auto g = testing::path_graph(5);
  for (auto algo : {SamplerAlgorithm::kWilson, SamplerAlgorithm::kAldousBroder,
                    SamplerAlgorithm::kSequential}) {
    const auto t = sample_ust(g, 3, {algo, {}});
    EXPECT_EQ(t.edges(), (std::vector<EdgeId>{0, 1, 2, 3}));
  }
}

TEST(Sampler, UnitTriangleUniform) {
  const auto g = gen_complete(3);
  const ExactLaw law = exact_law(g);
  const std::size_t n = 100000;
  const auto counts = histogram(g, law, SamplerAlgorithm::kWilson, n, 1);
  const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(counts[i] - n / 3.0), 3 * sigma);
  EXPECT_EQ(counts[3], 0u);
}

TEST(Sampler, WeightedTriangle) {
  const auto g = make_graph(3, {{0, 1, 2}, {0, 2, 1}, {1, 2, 1}});
  const ExactLaw law = exact_law(g);
  EXPECT_NEAR(law.z, 5.0, 1e-12);
  const std::size_t n = 100000;
  for (auto algo : {SamplerAlgorithm::kWilson, SamplerAlgorithm::kAldousBroder,
                    SamplerAlgorithm::kSequential}) {
    const auto counts = histogram(g, law, algo, n, 7);
    const double f = counts[law.index_of({1, 2})] / double(n);
    EXPECT_LT(std::abs(f - 0.2), 3 * std::sqrt(0.2 * 0.8 / n)) << to_string(algo);
  }
}

// Every algorithm against the exact law on small corpus graphs with at most
// 40 spanning trees, so the TV noise floor of 10^6 draws is far below 0.01.
TEST(Sampler, ExactnessOnCorpus) {
  const auto corpus = exact_corpus(40, 6, 123);
  std::size_t tested = 0;
  for (std::size_t i = 0; i < corpus.size() && tested < 6; ++i) {
    const auto& g = corpus[i];
    const ExactLaw law = exact_law(g);
    if (law.size() > 40 || law.size() < 3) continue;
    ++tested;
    for (auto algo : {SamplerAlgorithm::kWilson, SamplerAlgorithm::kAldousBroder,
                      SamplerAlgorithm::kSequential}) {
      const auto counts = histogram(g, law, algo, 1000000, 100 + i);
      EXPECT_EQ(counts.back(), 0u);
      EXPECT_LE(tv_distance(counts, law), 0.01) << "graph " << i << " " << to_string(algo);
    }
  }
  EXPECT_GE(tested, 3u);
}

TEST(Sampler, SequentialHandlesHugeSpread) {
  // One dominant spanning tree: the path 0-1-2-3 with log-weights 900.
  const EdgeSpec s[] = {{0, 1, 900}, {1, 2, 900}, {2, 3, 900}, {0, 2, 0}, {1, 3, 0}, {0, 3, 0}};
  const auto g = WeightedMultiGraph::build(4, s, WeightMode::kLog);
  UstSampler sampler(g);
  EXPECT_EQ(sampler.algorithm(), SamplerAlgorithm::kSequential);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sampler(rng).edges(), (std::vector<EdgeId>{0, 1, 2}));
}

TEST(Sampler, AutoSelection) {
  const auto g = assign_weights(gen_complete(6), WeightLaw::lognormal(0, 1), 4).graph;
  EXPECT_EQ(UstSampler(g).algorithm(), SamplerAlgorithm::kWilson);

  const auto big = gen_random_regular(600, 3, 1);
  std::vector<double> lw(big.num_edges(), 0.0);
  lw[0] = 50.0;
  EXPECT_THROW(UstSampler(big.with_log_weights(lw)), std::domain_error);

  const auto split = make_graph(4, {{0, 1, 1}, {2, 3, 1}});
  EXPECT_THROW(UstSampler{split}, std::invalid_argument);
}

TEST(Sampler, BranchesAreSelfAvoiding) {
  const auto g = assign_weights(gen_random_regular(200, 3, 2), WeightLaw::pareto(1.1), 5).graph;
  std::size_t branches = 0;
  SamplerOptions opt;
  opt.algorithm = SamplerAlgorithm::kWilson;
  opt.on_branch = [&](std::span<const VertexId> path) {
    ++branches;
    std::set<VertexId> seen(path.begin(), path.end());
    ASSERT_EQ(seen.size(), path.size());
  };
  UstSampler sampler(g, opt);
  Rng rng(9);
  for (int i = 0; i < 20; ++i) sampler(rng);
  EXPECT_GT(branches, 0u);
}

TEST(Sampler, Deterministic) {
  const auto g = assign_weights(gen_random_regular(500, 3, 2), WeightLaw::lognormal(0, 1), 5).graph;
  EXPECT_EQ(sample_ust(g, 77), sample_ust(g, 77));
  EXPECT_FALSE(sample_ust(g, 77) == sample_ust(g, 78));
}

TEST(Kruskal, Examples) {
  const auto tri = gen_complete(3);  // ab ac bc
  const double keys[] = {0.1, 0.2, 0.3};
  EXPECT_EQ(kruskal_min_tree(tri, keys).edges(), (std::vector<EdgeId>{0, 1}));
  const double flat[] = {1, 1, 1};
  EXPECT_EQ(kruskal_min_tree(tri, flat).edges(), (std::vector<EdgeId>{0, 1}));
  const auto p = testing::path_graph(4);
  const double pk[] = {3, 1, 2};
  EXPECT_EQ(kruskal_min_tree(p, pk).edges(), (std::vector<EdgeId>{0, 1, 2}));
}

TEST(Kruskal, MatchesBruteForceMinimum) {
  std::mt19937_64 rng(8);
  const auto corpus = exact_corpus(30, 7, 44);
  for (const auto& g : corpus) {
    std::vector<double> keys(g.num_edges());
    for (double& k : keys) k = std::uniform_real_distribution<double>(0, 1)(rng);
    double best = INFINITY;
    std::vector<EdgeId> arg;
    for (const auto& t : testing::brute_trees(g)) {
      double s = 0;
      for (EdgeId e : t) s += keys[e];
      if (s < best) {
        best = s;
        arg = t;
      }
    }
    EXPECT_EQ(kruskal_min_tree(g, keys).edges(), arg);
  }
}

TEST(Kruskal, MonotoneInvariance) {
  const auto g = gen_complete(30);
  Rng rng(2);
  std::vector<double> u(g.num_edges()), e(g.num_edges()), c(g.num_edges());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = uniform_open01(rng);
    e[i] = std::exp(u[i]);
    c[i] = u[i] * u[i] * u[i];
  }
  const auto t = kruskal_min_tree(g, u);
  EXPECT_EQ(t, kruskal_min_tree(g, e));
  EXPECT_EQ(t, kruskal_min_tree(g, c));
}

}  // namespace
}  // namespace ustlab
