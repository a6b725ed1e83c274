// Command-line driver: ustlab <subcommand> [options]
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ustlab/edge_list.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/harness.hpp"
#include "ustlab/percolation.hpp"
#include "ustlab/sampler.hpp"
#include "ustlab/spectra.hpp"
#include "ustlab/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ustlab;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> threads;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

ExperimentConfig load_config(const Common& c, const json& defaults = json::object()) {
  json j = defaults;
  if (!c.config.empty()) j.update(read_json_file(c.config));
  ExperimentConfig cfg = config_from_json(j);
  if (c.seed) cfg.seed = *c.seed;
  if (c.threads) cfg.threads = *c.threads;
  if (!c.out.empty()) cfg.output = c.out;
  cfg.validate();
  return cfg;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output);
  return (fs::path(cfg.output) / name).string();
}

std::string tree_line(const WeightedMultiGraph& g, const SpanningTree& t) {
  std::ostringstream os;
  os << tree_diameter(t) << ',';
  for (std::size_t i = 0; i < t.edges().size(); ++i) {
    const Edge& e = g.edge(t.edges()[i]);
    os << (i ? " " : "") << e.u << '-' << e.v;
  }
  return os.str();
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--seed", c.seed, "Master seed (overrides config)");
  app->add_option("--out", c.out, "Output directory (overrides config)");
  app->add_option("--threads", c.threads, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ustlab: uniform spanning trees on randomly weighted graphs"};
  app.require_subcommand(1);
  Common common;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a weighted graph as an edge list");
  add_common(gen, common);
  std::string family = "regular", law_json;
  std::size_t gen_n = 0, gen_degree = 3, gen_dim = 2, gen_l = 1;
  gen->add_option("--family", family, "regular | box | complete");
  gen->add_option("--n", gen_n, "Vertex count (regular, complete)");
  gen->add_option("--degree", gen_degree, "Degree (regular)");
  gen->add_option("--dim", gen_dim, "Dimension (box)");
  gen->add_option("--L", gen_l, "Half-side (box)");
  gen->add_option("--law", law_json, R"(Weight law as JSON, e.g. {"kind":"uniform","params":{"a":0.5,"b":1.5}})");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw weighted uniform spanning trees");
  add_common(sample, common);
  std::string graph_path, algorithm = "auto";
  std::size_t count = 1;
  sample->add_option("--graph", graph_path, "Edge-list file")->required();
  sample->add_option("--algorithm", algorithm, "auto | wilson | aldous-broder | sequential");
  sample->add_option("--count", count, "Number of trees");

  // mst
  auto* mst = app.add_subcommand("mst", "Maximum-weight spanning tree, or the U-MST of K_n");
  add_common(mst, common);
  std::size_t mst_complete = 0;
  mst->add_option("--graph", graph_path, "Edge-list file (maximum-weight tree)");
  mst->add_option("--complete", mst_complete, "K_n with i.i.d. uniform keys (minimum tree)");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Expansion and mixing report as JSON");
  add_common(metrics, common);
  metrics->add_option("--graph", graph_path, "Edge-list file")->required();

  // percolate
  auto* perc = app.add_subcommand("percolate", "Event-probability sweep over a grid of A");
  add_common(perc, common);

  auto* pipe = app.add_subcommand("pipeline", "Conditioning pipeline probe (G'', G', bounds)");
  add_common(pipe, common);

  auto* scaling = app.add_subcommand("scaling", "Diameter scaling study");
  add_common(scaling, common);

  auto* cx = app.add_subcommand("counterexample", "Complete graph with w = exp(exp(1/U))");
  add_common(cx, common);

  auto* ver = app.add_subcommand("verify", "Exact verification suite (JSON report)");
  add_common(ver, common);
  VerifyOptions vopt;
  std::string verify_graph;
  ver->add_option("--graph", verify_graph, "Also check this edge-list file");
  ver->add_option("--tv-samples", vopt.tv_samples, "Sampler draws per TV check");
  ver->add_option("--gap-replicates", vopt.gap_replicates, "Gap-law replicates");
  ver->add_option("--box-samples", vopt.box_samples, "Sampled subsets on the 5x5 box");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ExperimentConfig cfg;
      cfg.family = family == "box" ? Family::kBox
                   : family == "complete" ? Family::kComplete
                   : family == "regular" ? Family::kRegular
                   : throw std::invalid_argument("unknown family '" + family + "'");
      cfg.degree = gen_degree;
      cfg.dim = gen_dim;
      if (!law_json.empty()) cfg.law = weight_law_from_json(json::parse(law_json));
      const std::size_t gv = cfg.family == Family::kBox ? gen_l : gen_n;
      const std::uint64_t seed = common.seed.value_or(0);
      const auto base = make_family_graph(cfg, gv, derive_seed(seed, 0));
      const auto g = assign_weights(base, cfg.law, derive_seed(seed, 1)).graph;
      if (common.out.empty()) {
        write_edge_list(std::cout, g);
      } else {
        fs::create_directories(common.out);
        write_edge_list_file((fs::path(common.out) / "graph.tsv").string(), g);
      }
      return 0;
    }

    if (*sample) {
      const auto g = read_edge_list_file(graph_path);
      SamplerOptions opt;
      opt.algorithm = algorithm == "wilson"          ? SamplerAlgorithm::kWilson
                      : algorithm == "aldous-broder" ? SamplerAlgorithm::kAldousBroder
                      : algorithm == "sequential"    ? SamplerAlgorithm::kSequential
                      : algorithm == "auto"          ? SamplerAlgorithm::kAuto
                      : throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
      UstSampler sampler(g, opt);
      Rng rng(common.seed.value_or(0));
      std::cout << "diameter,edges\n";
      for (std::size_t i = 0; i < count; ++i) std::cout << tree_line(g, sampler(rng)) << '\n';
      return 0;
    }

    if (*mst) {
      if (mst_complete >= 2) {
        Rng rng(common.seed.value_or(0));
        std::vector<double> keys(mst_complete * (mst_complete - 1) / 2);
        for (double& k : keys) k = uniform_open01(rng);
        std::cout << "diameter\n"
                  << parent_tree_diameter(complete_min_tree(mst_complete, keys)) << '\n';
        return 0;
      }
      if (graph_path.empty()) throw std::invalid_argument("mst needs --graph or --complete");
      const auto g = read_edge_list_file(graph_path);
      std::vector<double> keys(g.num_edges());
      for (EdgeId e = 0; e < g.num_edges(); ++e) keys[e] = -g.edge(e).logw;
      std::cout << "diameter,edges\n" << tree_line(g, kruskal_min_tree(g, keys)) << '\n';
      return 0;
    }

    if (*metrics) {
      const auto g = read_edge_list_file(graph_path);
      const Stationary st = stationary(g);
      json j = {{"n", g.num_vertices()},
                {"m", g.num_edges()},
                {"pi_min", st.pi_min},
                {"pi_max", st.pi_max},
                {"D", st.pi_max / st.pi_min}};
      const Bracket phi = bottleneck_bracket(g);
      if (phi.exact) {
        j["Phi"] = phi.lower;
      } else {
        j["Phi"] = {{"lower", phi.lower}, {"upper", phi.upper}};
      }
      if (g.num_vertices() <= kHeatKernelMaxVertices) {
        const MnsReport r = mns_report(g);
        j["t_mix"] = r.t_mix;
        j["theta"] = r.theta;
        j["alpha_star"] = r.alpha_star ? json(*r.alpha_star) : json(nullptr);
      } else {
        j["t_mix"] = nullptr;
        j["theta"] = nullptr;
        j["alpha_star"] = nullptr;
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*perc) {
      const ExperimentConfig cfg = load_config(common);
      if (cfg.a_grid.empty()) throw std::invalid_argument("percolate needs A_grid in the config");
      std::string csv = sweep_csv_header() + "\n";
      for (std::size_t gv : cfg.grid) {
        SweepSpec spec;
        spec.make_graph = [&cfg, gv](std::uint64_t s) { return make_family_graph(cfg, gv, s); };
        spec.law = cfg.law;
        spec.a_grid = cfg.a_grid;
        spec.trials = cfg.trials;
        spec.seed = derive_seed(cfg.seed, gv);
        spec.threads = cfg.threads;
        spec.events.iso_budget = cfg.iso_budget;
        spec.events.c0 = cfg.c0;
        if (cfg.family == Family::kBox) {
          spec.events.mode = EventMode::kLattice;
          spec.events.dim = cfg.dim;
          spec.events.half_side = gv;
        }
        for (const auto& row : event_probability_sweep(spec)) csv += to_csv(row) + "\n";
      }
      if (cfg.output.empty()) {
        std::cout << csv;
      } else {
        write_text_file(out_path(cfg, "percolation.csv"), csv);
        write_text_file(out_path(cfg, "manifest.json"),
                        manifest(cfg, "percolate", 0.0, json::object()).dump(2) + "\n");
      }
      return 0;
    }

    if (*pipe) {
      const ExperimentConfig cfg = load_config(common);
      const PipelineResult r = run_pipeline_probe(cfg);
      std::size_t events = 0, above = 0, sandwich = 0;
      for (const auto& rec : r.records) {
        sandwich += rec.sandwich_ok;
        if (rec.events.all()) {
          ++events;
          above += rec.phi_gp.lower >= rec.bound_phi;
        }
      }
      json summary = {{"A", r.a},
                      {"trials", r.records.size()},
                      {"event_trials", events},
                      {"phi_lower_above_bound", above},
                      {"sandwich_ok", sandwich}};
      if (cfg.output.empty()) {
        std::cout << pipeline_csv(r.records);
      } else {
        write_text_file(out_path(cfg, "pipeline.csv"), pipeline_csv(r.records));
        write_text_file(out_path(cfg, "manifest.json"),
                        manifest(cfg, "pipeline", r.wall_seconds, {{"summary", summary}}).dump(2) +
                            "\n");
      }
      std::cerr << summary.dump() << '\n';
      return 0;
    }

    if (*scaling) {
      const ExperimentConfig cfg = load_config(common);
      const ScalingResult r = run_scaling(cfg);
      json timings = json::array();
      for (const auto& rec : r.records) timings.push_back(rec.wall_seconds);
      if (cfg.output.empty()) {
        std::cout << scaling_csv(r.records);
      } else {
        write_text_file(out_path(cfg, "scaling.csv"), scaling_csv(r.records));
        write_text_file(out_path(cfg, "manifest.json"),
                        manifest(cfg, "scaling", r.wall_seconds,
                                 {{"fit", to_json(r.fit)}, {"trial_wall_seconds", timings}})
                                .dump(2) +
                            "\n");
      }
      std::cerr << to_json(r.fit).dump() << '\n';
      return 0;
    }

    if (*cx) {
      const json defaults = {{"family", "complete"},
                             {"law", {{"kind", "double_exp_inv_uniform"}, {"params", json::object()}}},
                             {"grid", {128, 256, 512, 1024, 2048}},
                             {"trials", 200},
                             {"agreement_grid", {16, 24, 32}},
                             {"agreement_trials", 200}};
      const ExperimentConfig cfg = load_config(common, defaults);
      const CounterexampleResult r = run_counterexample(cfg);
      json agreement = json::array();
      for (const auto& row : r.agreement) {
        agreement.push_back({{"n", row.n}, {"trials", row.trials}, {"matches", row.matches},
                             {"frequency", row.frequency()}});
      }
      if (cfg.output.empty()) {
        std::cout << agreement_csv(r.agreement) << '\n' << scaling_csv(r.mst_records);
      } else {
        write_text_file(out_path(cfg, "agreement.csv"), agreement_csv(r.agreement));
        write_text_file(out_path(cfg, "mst_scaling.csv"), scaling_csv(r.mst_records));
        write_text_file(out_path(cfg, "manifest.json"),
                        manifest(cfg, "counterexample", r.wall_seconds,
                                 {{"fit", to_json(r.fit)}, {"agreement", agreement}})
                                .dump(2) +
                            "\n");
      }
      std::cerr << json{{"agreement", agreement}, {"fit", to_json(r.fit)}}.dump() << '\n';
      return 0;
    }

    if (*ver) {
      if (!common.config.empty()) {
        const json j = read_json_file(common.config);
        vopt.tv_samples = j.value("tv_samples", vopt.tv_samples);
        vopt.gap_replicates = j.value("gap_replicates", vopt.gap_replicates);
        vopt.box_samples = j.value("box_samples", vopt.box_samples);
        vopt.corpus_size = j.value("corpus_size", vopt.corpus_size);
        vopt.seed = j.value("seed", vopt.seed);
      }
      if (common.seed) vopt.seed = *common.seed;
      if (common.threads) vopt.threads = *common.threads;
      if (!verify_graph.empty()) vopt.graph_path = verify_graph;
      const auto checks = verify(vopt);
      const std::string report = to_json(checks).dump(2) + "\n";
      if (common.out.empty()) {
        std::cout << report;
      } else {
        fs::create_directories(common.out);
        write_text_file((fs::path(common.out) / "verify.json").string(), report);
        std::cout << report;
      }
      return all_passed(checks) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
