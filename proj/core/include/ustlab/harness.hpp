#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ustlab/graph.hpp"
#include "ustlab/percolation.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/weights.hpp"

namespace ustlab {

inline constexpr const char* kVersion = USTLAB_VERSION;

enum class Family { kRegular, kBox, kComplete };

struct ExperimentConfig {
  Family family = Family::kRegular;
  std::size_t degree = 3;  // regular
  std::size_t dim = 2;     // box
  WeightLaw law = WeightLaw::constant(1.0);
  // n for regular and complete graphs, the half-side L for boxes.
  std::vector<std::size_t> grid;
  std::size_t trials = 1;
  std::optional<double> a;
  std::optional<double> target_p;
  std::vector<double> a_grid;  // percolation sweeps
  std::uint64_t seed = 0;
  std::string output;  // directory; empty = no files
  std::size_t threads = 1;
  SamplerAlgorithm algorithm = SamplerAlgorithm::kAuto;

  // Pipeline probe.
  std::size_t iso_budget = 20;
  double c0 = 0.1;
  double box_margin_c = 1.0;
  std::size_t threshold_draws = 1000000;

  // Counter-example part (a): UST versus U-MST agreement.
  std::vector<std::size_t> agreement_grid;
  std::size_t agreement_trials = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
const char* to_string(Family f);

// Vertex count for one grid value.
std::size_t family_vertices(const ExperimentConfig& c, std::size_t grid_value);
WeightedMultiGraph make_family_graph(const ExperimentConfig& c, std::size_t grid_value,
                                     std::uint64_t seed);

// Trial seed; the graph, weights and UST streams derive from it.
std::uint64_t trial_seed(std::uint64_t master, std::size_t grid_value, std::size_t trial);

struct TrialRecord {
  std::size_t grid_value = 0;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t diameter = 0;
  double wall_seconds = 0.0;  // manifest only
  std::string algorithm;
};

struct ScalingFit {
  bool fitted = false;  // false for fewer than two grid points
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
  std::vector<std::pair<std::size_t, double>> medians;  // (n, median diameter)
};

double median(std::vector<double> xs);
// OLS of log median against log n.
ScalingFit fit_scaling(const std::vector<std::pair<std::size_t, double>>& medians);
ScalingFit fit_records(const std::vector<TrialRecord>& records);
nlohmann::json to_json(const ScalingFit& fit);

struct ScalingResult {
  std::vector<TrialRecord> records;  // grid order, then trial order
  ScalingFit fit;
  double wall_seconds = 0.0;
};

// Throws std::invalid_argument for complete graphs with the double-exponential
// law (see run_counterexample) and std::domain_error when the sampler cannot
// handle the weight range.
ScalingResult run_scaling(const ExperimentConfig& c);
// Diameter of one scaling trial, recomputed from its stored seed.
std::size_t recompute_diameter(const ExperimentConfig& c, std::size_t grid_value,
                               std::uint64_t seed);

std::string scaling_csv(const std::vector<TrialRecord>& records);

struct PipelineRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double a = 0.0;
  double p_hat = 0.0;
  EventReport events;
  Bracket h_gpp;   // isoperimetric constant of G''
  Bracket phi_gp;  // bottleneck ratio of G'
  std::size_t gp_vertices = 0;
  std::size_t maxblock = 0;
  std::size_t dropped_self_loops = 0;
  double bound_h = 0.0;    // 1/(8 Delta (log n)^2)
  double bound_phi = 0.0;  // 1/(16 A^2 Delta^2 (log n)^3)
  // Box family with an exact profile: min over r of Phi(r) divided by
  // C (pi_min/r)^{1/d} / (A^4 (log n)^{d+4}); NaN when not evaluated.
  double box_margin = 0.0;
  std::size_t diam_t = 0;
  std::size_t diam_tp = 0;
  bool sandwich_ok = false;
};

struct PipelineResult {
  std::vector<PipelineRecord> records;
  double a = 0.0;
  double wall_seconds = 0.0;
};

PipelineResult run_pipeline_probe(const ExperimentConfig& c);
std::string pipeline_csv(const std::vector<PipelineRecord>& records);

struct AgreementRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t matches = 0;
  std::string algorithm;
  double frequency() const { return trials ? double(matches) / double(trials) : 0.0; }
};

struct CounterexampleResult {
  std::vector<AgreementRow> agreement;
  std::vector<TrialRecord> mst_records;
  ScalingFit fit;
  double wall_seconds = 0.0;
};

CounterexampleResult run_counterexample(const ExperimentConfig& c);
std::string agreement_csv(const std::vector<AgreementRow>& rows);

// Minimum spanning tree of K_n under keys given in lexicographic edge order
// (0,1), (0,2), ..., (n-2,n-1), by dense Prim; returns the parent array
// rooted at 0.
std::vector<VertexId> complete_min_tree(std::size_t n, const std::vector<double>& keys);
std::size_t parent_tree_diameter(const std::vector<VertexId>& parent);

// Random connected graph for exact-metric corpora: a uniform random
// attachment tree plus each remaining pair with probability edge_prob,
// weights drawn from `law`.
WeightedMultiGraph random_connected_graph(std::size_t n, double edge_prob, const WeightLaw& law,
                                          std::uint64_t seed);
// `count` graphs with 2 <= n <= max_n.
std::vector<WeightedMultiGraph> exact_corpus(std::size_t count, std::size_t max_n,
                                             std::uint64_t seed);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string status;  // pass | fail | inconclusive
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t tv_samples = 1000000;
  std::size_t gap_replicates = 1000000;
  std::size_t box_samples = 1000000;
  std::size_t corpus_size = 50;
  std::optional<std::string> graph_path;
  std::size_t threads = 1;
};

// Statistical power guard for TV checks: the expected TV of N draws from a
// k-outcome law is at most sqrt(k/N)/2.
double tv_noise_bound(std::size_t outcomes, std::size_t samples);

// Empirical TV between N sampler draws and the exact law of g.
Check sampler_tv_check(const std::string& name, const WeightedMultiGraph& g, std::size_t samples,
                       std::uint64_t seed, double threshold = 0.01);

std::vector<Check> verify(const VerifyOptions& options);
nlohmann::json to_json(const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

// Manifest with config echo, RNG identifier, version, timings and extras.
nlohmann::json manifest(const ExperimentConfig& c, const std::string& kind, double wall_seconds,
                        const nlohmann::json& extra);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ustlab
