#include "ustlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ustlab/edge_list.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/oracle.hpp"
#include "ustlab/parallel.hpp"
#include "ustlab/spectra.hpp"

namespace ustlab {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Family family_from_string(const std::string& s) {
  if (s == "regular") return Family::kRegular;
  if (s == "box") return Family::kBox;
  if (s == "complete") return Family::kComplete;
  throw std::invalid_argument("unknown family '" + s + "'");
}

SamplerAlgorithm algorithm_from_string(const std::string& s) {
  for (auto a : {SamplerAlgorithm::kAuto, SamplerAlgorithm::kWilson,
                 SamplerAlgorithm::kAldousBroder, SamplerAlgorithm::kSequential}) {
    if (s == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown sampler algorithm '" + s + "'");
}

SpanningTree draw_tree(const WeightedMultiGraph& g, SamplerAlgorithm algorithm,
                       std::uint64_t seed, std::string* used = nullptr) {
  UstSampler sampler(g, {algorithm, {}});
  if (used) *used = to_string(sampler.algorithm());
  Rng rng(seed);
  return sampler(rng);
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::kRegular: return "regular";
    case Family::kBox: return "box";
    case Family::kComplete: return "complete";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("grid must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw std::invalid_argument("grid must be strictly increasing");
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  law.validate();
  if (a && !(*a > 1.0)) throw std::invalid_argument("A must exceed 1");
  if (target_p && !(*target_p > 0.0 && *target_p <= 1.0)) {
    throw std::invalid_argument("target_p must lie in (0, 1]");
  }
  for (double x : a_grid) {
    if (!(x > 1.0)) throw std::invalid_argument("every A in A_grid must exceed 1");
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
  switch (family) {
    case Family::kRegular:
      if (degree < 3) throw std::invalid_argument("regular family needs degree >= 3");
      for (auto n : grid) {
        if (n <= degree || (n * degree) % 2) {
          throw std::invalid_argument("regular family: need n > degree and n * degree even");
        }
      }
      break;
    case Family::kBox:
      if (dim < 1) throw std::invalid_argument("box family needs dim >= 1");
      if (grid.front() < 1) throw std::invalid_argument("box half-side must be at least 1");
      break;
    case Family::kComplete:
      if (grid.front() < 2) throw std::invalid_argument("complete family needs n >= 2");
      for (auto n : agreement_grid) {
        if (n < 2) throw std::invalid_argument("complete family needs n >= 2");
      }
      break;
  }
}

ExperimentConfig config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "family", "degree", "dim", "law", "grid", "trials", "A", "target_p", "seed", "output",
      "threads", "algorithm", "iso_budget", "c0", "box_margin_c", "threshold_draws",
      "agreement_grid", "agreement_trials", "A_grid"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    c.family = family_from_string(j.value("family", std::string("regular")));
    c.degree = j.value("degree", c.degree);
    c.dim = j.value("dim", c.dim);
    if (j.contains("law")) c.law = weight_law_from_json(j.at("law"));
    c.grid = j.value("grid", c.grid);
    c.trials = j.value("trials", c.trials);
    if (j.contains("A") && !j.at("A").is_null()) c.a = j.at("A").get<double>();
    if (j.contains("target_p") && !j.at("target_p").is_null()) {
      c.target_p = j.at("target_p").get<double>();
    }
    c.seed = j.value("seed", c.seed);
    c.output = j.value("output", c.output);
    c.threads = j.value("threads", c.threads);
    c.algorithm = algorithm_from_string(j.value("algorithm", std::string("auto")));
    c.iso_budget = j.value("iso_budget", c.iso_budget);
    c.c0 = j.value("c0", c.c0);
    c.box_margin_c = j.value("box_margin_c", c.box_margin_c);
    c.threshold_draws = j.value("threshold_draws", c.threshold_draws);
    c.agreement_grid = j.value("agreement_grid", c.agreement_grid);
    c.agreement_trials = j.value("agreement_trials", c.agreement_trials);
    c.a_grid = j.value("A_grid", c.a_grid);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config: ") + e.what());
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j = {{"family", to_string(c.family)},
            {"degree", c.degree},
            {"dim", c.dim},
            {"law", to_json(c.law)},
            {"grid", c.grid},
            {"trials", c.trials},
            {"A", c.a ? json(*c.a) : json(nullptr)},
            {"target_p", c.target_p ? json(*c.target_p) : json(nullptr)},
            {"seed", c.seed},
            {"output", c.output},
            {"threads", c.threads},
            {"algorithm", to_string(c.algorithm)},
            {"iso_budget", c.iso_budget},
            {"c0", c.c0},
            {"box_margin_c", c.box_margin_c},
            {"threshold_draws", c.threshold_draws},
            {"agreement_grid", c.agreement_grid},
            {"agreement_trials", c.agreement_trials},
            {"A_grid", c.a_grid}};
  return j;
}

std::size_t family_vertices(const ExperimentConfig& c, std::size_t grid_value) {
  if (c.family != Family::kBox) return grid_value;
  std::size_t n = 1;
  for (std::size_t i = 0; i < c.dim; ++i) n *= 2 * grid_value + 1;
  return n;
}

WeightedMultiGraph make_family_graph(const ExperimentConfig& c, std::size_t grid_value,
                                     std::uint64_t seed) {
  switch (c.family) {
    case Family::kRegular: return gen_random_regular(grid_value, c.degree, seed);
    case Family::kBox: return gen_box(c.dim, grid_value);
    case Family::kComplete: return gen_complete(grid_value);
  }
  throw std::logic_error("unknown family");
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t grid_value, std::size_t trial) {
  return derive_seed(derive_seed(master, grid_value), trial);
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size();
  return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

ScalingFit fit_scaling(const std::vector<std::pair<std::size_t, double>>& medians) {
  ScalingFit fit;
  fit.medians = medians;
  const std::size_t k = medians.size();
  if (k < 2) return fit;
  double sx = 0, sy = 0;
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(static_cast<double>(medians[i].first));
    y[i] = std::log(medians[i].second);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.fitted = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
  fit.stderr_slope = k > 2 ? std::sqrt(ssr / double(k - 2) / sxx) : 0.0;
  return fit;
}

ScalingFit fit_records(const std::vector<TrialRecord>& records) {
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& r : records) by_n[r.n].push_back(static_cast<double>(r.diameter));
  std::vector<std::pair<std::size_t, double>> medians;
  for (auto& [n, ds] : by_n) medians.emplace_back(n, median(ds));
  return fit_scaling(medians);
}

json to_json(const ScalingFit& fit) {
  json med = json::array();
  for (auto [n, m] : fit.medians) med.push_back({{"n", n}, {"median_diameter", m}});
  json j = {{"fitted", fit.fitted}, {"medians", med}};
  if (fit.fitted) {
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["stderr"] = fit.stderr_slope;
    j["r2"] = fit.r2;
  }
  return j;
}

namespace {

TrialRecord scaling_trial(const ExperimentConfig& c, std::size_t grid_value, std::size_t trial,
                          std::uint64_t seed) {
  const auto start = Clock::now();
  TrialRecord r;
  r.grid_value = grid_value;
  r.trial = trial;
  r.seed = seed;
  const WeightedMultiGraph base = make_family_graph(c, grid_value, derive_seed(seed, 0));
  r.n = base.num_vertices();
  const WeightedDraw draw = assign_weights(base, c.law, derive_seed(seed, 1));
  const SpanningTree t = draw_tree(draw.graph, c.algorithm, derive_seed(seed, 2), &r.algorithm);
  r.diameter = tree_diameter(t);
  r.wall_seconds = seconds_since(start);
  return r;
}

}  // namespace

ScalingResult run_scaling(const ExperimentConfig& c) {
  c.validate();
  if (c.family == Family::kComplete && c.law.kind == WeightLaw::Kind::kDoubleExpInvUniform) {
    throw std::invalid_argument(
        "complete graphs with the double-exponential law go through the counterexample run");
  }
  const auto start = Clock::now();
  ScalingResult out;
  out.records.resize(c.grid.size() * c.trials);
  parallel_for(out.records.size(), c.threads, [&](std::size_t i) {
    const std::size_t gv = c.grid[i / c.trials];
    const std::size_t trial = i % c.trials;
    out.records[i] = scaling_trial(c, gv, trial, trial_seed(c.seed, gv, trial));
  });
  out.fit = fit_records(out.records);
  out.wall_seconds = seconds_since(start);
  return out;
}

std::size_t recompute_diameter(const ExperimentConfig& c, std::size_t grid_value,
                               std::uint64_t seed) {
  return scaling_trial(c, grid_value, 0, seed).diameter;
}

std::string scaling_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << "grid_value,n,trial,seed,algorithm,diameter\n";
  for (const auto& r : records) {
    os << r.grid_value << ',' << r.n << ',' << r.trial << ',' << r.seed << ',' << r.algorithm
       << ',' << r.diameter << '\n';
  }
  return os.str();
}

PipelineResult run_pipeline_probe(const ExperimentConfig& c) {
  c.validate();
  if (!c.a && !c.target_p) throw std::invalid_argument("pipeline probe needs A or target_p");
  const auto start = Clock::now();
  PipelineResult out;
  out.a = c.a ? *c.a
              : solve_threshold(c.law, *c.target_p, c.threshold_draws, derive_seed(c.seed, 0xA));
  out.records.resize(c.grid.size() * c.trials);
  parallel_for(out.records.size(), c.threads, [&](std::size_t i) {
    const std::size_t gv = c.grid[i / c.trials];
    PipelineRecord& r = out.records[i];
    r.trial = i % c.trials;
    r.seed = trial_seed(c.seed, gv, r.trial);
    r.a = out.a;
    const WeightedMultiGraph base = make_family_graph(c, gv, derive_seed(r.seed, 0));
    const WeightedDraw draw = assign_weights(base, c.law, derive_seed(r.seed, 1));
    const WeightedMultiGraph& g = draw.graph;
    r.n = g.num_vertices();
    const SpanningTree t = draw_tree(g, c.algorithm, derive_seed(r.seed, 2));

    const PercolationView view = threshold(g, out.a);
    r.p_hat = view.p_hat;
    EventOptions opt;
    if (c.family == Family::kBox) {
      opt.mode = EventMode::kLattice;
      opt.dim = c.dim;
      opt.half_side = gv;
    }
    opt.iso_budget = c.iso_budget;
    opt.c0 = c.c0;
    opt.seed = derive_seed(r.seed, 3);
    r.events = check_events(g, view, opt);

    const ConditionedPair pair = condition_on_tree(g, view, t);
    r.gp_vertices = pair.gp.num_vertices();
    r.maxblock = pair.map.max_block();
    r.dropped_self_loops = pair.dropped_self_loops;
    r.h_gpp = iso_bracket(pair.gpp, c.iso_budget);
    r.phi_gp = bottleneck_bracket(pair.gp, c.iso_budget);

    const double delta = static_cast<double>(g.max_degree());
    const double log_n = std::log(static_cast<double>(r.n));
    r.bound_h = 1.0 / (8.0 * delta * log_n * log_n);
    r.bound_phi = 1.0 / (16.0 * out.a * out.a * delta * delta * log_n * log_n * log_n);

    r.box_margin = std::numeric_limits<double>::quiet_NaN();
    if (c.family == Family::kBox && pair.gp.num_vertices() >= 2 &&
        pair.gp.num_vertices() <= std::min(c.iso_budget, kExactSubsetMaxVertices)) {
      const BottleneckProfile profile = bottleneck_profile(pair.gp);
      const double pi_min = stationary(pair.gp).pi_min;
      const double dd = static_cast<double>(c.dim);
      const double scale =
          c.box_margin_c / (std::pow(out.a, 4.0) * std::pow(log_n, dd + 4.0));
      double margin = std::numeric_limits<double>::infinity();
      // The bound decreases in r, so on each piece its worst point is the left end.
      for (const auto& [rr, phi] : profile.breakpoints) {
        margin = std::min(margin, phi / (scale * std::pow(pi_min / rr, 1.0 / dd)));
      }
      r.box_margin = margin;
    }

    // T' = image of the open tree edges in G'.
    std::unordered_map<EdgeId, EdgeId> gp_of_origin;
    for (EdgeId e = 0; e < pair.gp.num_edges(); ++e) gp_of_origin[pair.gp.edge(e).origin] = e;
    std::vector<EdgeId> tp;
    for (EdgeId e : t.edges()) {
      if (view.open[e]) tp.push_back(gp_of_origin.at(g.edge(e).origin));
    }
    const SpanningTree tree_p = SpanningTree::from_edges(pair.gp, std::move(tp));
    r.diam_t = tree_diameter(t);
    r.diam_tp = tree_diameter(tree_p);
    r.sandwich_ok = r.diam_tp <= r.diam_t && r.diam_t <= r.maxblock * r.diam_tp + 2 * r.maxblock;
  });
  out.wall_seconds = seconds_since(start);
  return out;
}

std::string pipeline_csv(const std::vector<PipelineRecord>& records) {
  std::ostringstream os;
  os << "n,trial,seed,A,p_hat,B1,B2,B3,B4,B2_not_refuted,giant_size,h_giant_lower,"
        "h_giant_upper,h_gpp_lower,h_gpp_upper,h_gpp_exact,phi_gp_lower,phi_gp_upper,"
        "phi_gp_exact,gp_vertices,maxblock,dropped_self_loops,bound_h,bound_phi,box_margin,"
        "diam_t,diam_tp,sandwich_ok\n";
  for (const auto& r : records) {
    const auto& ev = r.events;
    const bool lattice = ev.mode == EventMode::kLattice;
    os << r.n << ',' << r.trial << ',' << r.seed << ',' << fmt(r.a) << ',' << fmt(r.p_hat) << ','
       << ev.b1 << ',' << ev.b2 << ',' << ev.b3 << ',' << ev.b4 << ',' << ev.b2_not_refuted << ','
       << ev.giant_size << ',' << (lattice ? "" : fmt(ev.giant_iso.lower)) << ','
       << (lattice ? "" : fmt(ev.giant_iso.upper)) << ',' << fmt(r.h_gpp.lower) << ','
       << fmt(r.h_gpp.upper) << ',' << r.h_gpp.exact << ',' << fmt(r.phi_gp.lower) << ','
       << fmt(r.phi_gp.upper) << ',' << r.phi_gp.exact << ',' << r.gp_vertices << ','
       << r.maxblock << ',' << r.dropped_self_loops << ',' << fmt(r.bound_h) << ','
       << fmt(r.bound_phi) << ',' << (std::isnan(r.box_margin) ? "" : fmt(r.box_margin))
       << ',' << r.diam_t << ',' << r.diam_tp << ',' << r.sandwich_ok << '\n';
  }
  return os.str();
}

std::vector<VertexId> complete_min_tree(std::size_t n, const std::vector<double>& keys) {
  if (n < 1) throw std::invalid_argument("empty graph");
  if (keys.size() != n * (n - 1) / 2) throw std::invalid_argument("need one key per pair");
  auto key = [&](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return keys[i * (2 * n - i - 1) / 2 + (j - i - 1)];
  };
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  std::size_t cur = 0;
  done[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double k = key(cur, v);
      if (k < best[v]) {
        best[v] = k;
        parent[v] = static_cast<VertexId>(cur);
      }
      if (next == n || best[v] < best[next]) next = v;
    }
    done[next] = 1;
    cur = next;
  }
  return parent;
}

std::size_t parent_tree_diameter(const std::vector<VertexId>& parent) {
  const std::size_t n = parent.size();
  if (n <= 1) return 0;
  std::vector<std::vector<VertexId>> adj(n);
  for (VertexId v = 0; v < n; ++v) {
    if (parent[v] != kNoVertex) {
      adj[v].push_back(parent[v]);
      adj[parent[v]].push_back(v);
    }
  }
  auto farthest = [&](VertexId s) {
    std::vector<std::size_t> dist(n, SIZE_MAX);
    std::vector<VertexId> queue{s};
    dist[s] = 0;
    VertexId far = s;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const VertexId x = queue[h];
      if (dist[x] > dist[far]) far = x;
      for (VertexId y : adj[x]) {
        if (dist[y] == SIZE_MAX) {
          dist[y] = dist[x] + 1;
          queue.push_back(y);
        }
      }
    }
    if (queue.size() != n) throw std::invalid_argument("parent array is not a spanning tree");
    return std::pair{far, dist[far]};
  };
  return farthest(farthest(0).first).second;
}

CounterexampleResult run_counterexample(const ExperimentConfig& c) {
  c.validate();
  if (c.family != Family::kComplete || c.law.kind != WeightLaw::Kind::kDoubleExpInvUniform) {
    throw std::invalid_argument(
        "counterexample needs the complete family with the double_exp_inv_uniform law");
  }
  const auto start = Clock::now();
  CounterexampleResult out;

  for (std::size_t n : c.agreement_grid) {
    const WeightedMultiGraph kn = gen_complete(n);
    std::vector<char> match(c.agreement_trials, 0);
    std::vector<std::string> used(c.agreement_trials);
    parallel_for(c.agreement_trials, c.threads, [&](std::size_t trial) {
      const std::uint64_t s = trial_seed(c.seed ^ 0xa9ee11e7ULL, n, trial);
      const WeightedDraw draw = assign_weights(kn, c.law, derive_seed(s, 1));
      const SpanningTree ust = draw_tree(draw.graph, c.algorithm, derive_seed(s, 2), &used[trial]);
      const SpanningTree mst = kruskal_min_tree(draw.graph, draw.uniforms);
      match[trial] = ust == mst;
    });
    AgreementRow row;
    row.n = n;
    row.trials = c.agreement_trials;
    row.matches = static_cast<std::size_t>(std::count(match.begin(), match.end(), 1));
    row.algorithm = used.empty() ? "" : used.front();
    out.agreement.push_back(row);
  }

  out.mst_records.resize(c.grid.size() * c.trials);
  parallel_for(out.mst_records.size(), c.threads, [&](std::size_t i) {
    const auto t0 = Clock::now();
    TrialRecord& r = out.mst_records[i];
    r.grid_value = r.n = c.grid[i / c.trials];
    r.trial = i % c.trials;
    r.seed = trial_seed(c.seed, r.n, r.trial);
    r.algorithm = "prim-u";
    Rng rng(derive_seed(r.seed, 1));
    std::vector<double> keys(r.n * (r.n - 1) / 2);
    for (double& k : keys) k = uniform_open01(rng);
    r.diameter = parent_tree_diameter(complete_min_tree(r.n, keys));
    r.wall_seconds = seconds_since(t0);
  });
  out.fit = fit_records(out.mst_records);
  out.wall_seconds = seconds_since(start);
  return out;
}

std::string agreement_csv(const std::vector<AgreementRow>& rows) {
  std::ostringstream os;
  os << "n,trials,matches,frequency,algorithm\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.trials << ',' << r.matches << ',' << fmt(r.frequency()) << ','
       << r.algorithm << '\n';
  }
  return os.str();
}

WeightedMultiGraph random_connected_graph(std::size_t n, double edge_prob, const WeightLaw& law,
                                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("need at least one vertex");
  law.validate();
  Rng rng(seed);
  std::set<std::pair<VertexId, VertexId>> pairs;
  for (VertexId v = 1; v < n; ++v) {
    const auto u = static_cast<VertexId>(uniform_open01(rng) * v);
    pairs.emplace(u, v);
  }
  for (VertexId i = 0; i < n; ++i) {
    for (VertexId j = i + 1; j < n; ++j) {
      if (uniform_open01(rng) < edge_prob) pairs.emplace(i, j);
    }
  }
  std::vector<EdgeSpec> specs;
  for (auto [u, v] : pairs) specs.push_back({u, v, law.draw_logw(rng)});
  return WeightedMultiGraph::build(n, specs, WeightMode::kLog);
}

std::vector<WeightedMultiGraph> exact_corpus(std::size_t count, std::size_t max_n,
                                             std::uint64_t seed) {
  if (max_n < 2) throw std::invalid_argument("corpus needs max_n >= 2");
  const WeightLaw laws[] = {WeightLaw::lognormal(0.0, 1.0), WeightLaw::uniform(0.1, 10.0),
                            WeightLaw::pareto(1.5, 1.0), WeightLaw::exponential(1.0)};
  std::vector<WeightedMultiGraph> out;
  out.reserve(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 2 + static_cast<std::size_t>(uniform_open01(rng) * double(max_n - 1));
    const double p = 0.2 + 0.6 * uniform_open01(rng);
    out.push_back(random_connected_graph(n, p, laws[i % 4], derive_seed(seed, i)));
  }
  return out;
}

double tv_noise_bound(std::size_t outcomes, std::size_t samples) {
  if (samples == 0) return std::numeric_limits<double>::infinity();
  return 0.5 * std::sqrt(static_cast<double>(outcomes) / static_cast<double>(samples));
}

Check sampler_tv_check(const std::string& name, const WeightedMultiGraph& g, std::size_t samples,
                       std::uint64_t seed, double threshold) {
  Check check{name, 0.0, threshold, "fail", ""};
  const ExactLaw law = exact_law(g);
  UstSampler sampler(g);
  Rng rng(seed);
  std::vector<std::uint64_t> counts(law.size() + 1, 0);
  for (std::size_t i = 0; i < samples; ++i) ++counts[law.index_of(sampler(rng).edges())];
  check.value = samples ? tv_distance(counts, law) : 1.0;
  const double noise = tv_noise_bound(law.size(), samples);
  check.detail = "N=" + std::to_string(samples) + " trees=" + std::to_string(law.size()) +
                 " noise_bound=" + fmt(noise) + " sampler=" + to_string(sampler.algorithm());
  if (noise > threshold) {
    check.status = "inconclusive";
  } else {
    check.status = check.value <= threshold ? "pass" : "fail";
  }
  return check;
}

namespace {

Check counted(const std::string& name, double value, double threshold, const std::string& detail) {
  return {name, value, threshold, value <= threshold ? "pass" : "fail", detail};
}

WeightedMultiGraph weighted_triangle() {
  const EdgeSpec e[] = {{0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 1.0}};
  return WeightedMultiGraph::build(3, e);
}

}  // namespace

std::vector<Check> verify(const VerifyOptions& o) {
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, auto&& body) {
    const auto start = Clock::now();
    const std::size_t first = checks.size();
    try {
      body();
    } catch (const std::exception& e) {
      checks.push_back({name, 0.0, 0.0, "fail", std::string("error: ") + e.what()});
    }
    const double secs = seconds_since(start);
    for (std::size_t i = first; i < checks.size(); ++i) checks[i].seconds = secs;
  };

  if (o.graph_path) {
    guarded("graph_file", [&] {
      const WeightedMultiGraph g = read_edge_list_file(*o.graph_path);
      if (!g.connected()) throw std::invalid_argument("graph is disconnected");
      if (g.num_vertices() <= 8) {
        checks.push_back(sampler_tv_check("graph_file_sampler_tv", g, o.tv_samples, o.seed));
      }
      if (g.num_vertices() <= kEnumerationMaxVertices && g.max_logw() < kLinearLogWeightLimit) {
        const ExactLaw law = exact_law(g);
        const double z = matrix_tree_z(g).log_z;
        checks.push_back(counted("graph_file_matrix_tree", std::abs(z - law.log_z), 1e-8,
                                 "|log Z(det) - log Z(enum)|"));
      }
      checks.push_back({"graph_file", 1.0, 1.0, "pass", "loaded " + *o.graph_path});
    });
  }

  guarded("sampler_tv_triangle", [&] {
    checks.push_back(
        sampler_tv_check("sampler_tv_triangle", weighted_triangle(), o.tv_samples, o.seed));
  });
  guarded("sampler_tv_k4", [&] {
    const auto k4 = assign_weights(gen_complete(4), WeightLaw::lognormal(0, 1), o.seed).graph;
    checks.push_back(sampler_tv_check("sampler_tv_k4", k4, o.tv_samples, o.seed + 1));
  });

  guarded("cayley", [&] {
    double worst = 0.0;
    for (std::size_t n = 3; n <= 8; ++n) {
      const double expect = std::pow(double(n), double(n - 2));
      worst = std::max(worst, std::abs(matrix_tree_z(gen_complete(n)).z - expect) / expect);
    }
    checks.push_back(counted("cayley", worst, 1e-8, "max relative error, K_3..K_8"));
  });

  guarded("spatial_markov", [&] {
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::size_t k = 0; k < 20; ++k) {
      const auto g =
          assign_weights(gen_complete(4), WeightLaw::lognormal(0, 1), derive_seed(o.seed, k)).graph;
      const EdgeId m = static_cast<EdgeId>(g.num_edges());
      std::vector<std::pair<std::vector<EdgeId>, std::vector<EdgeId>>> sets{{{}, {}}};
      for (EdgeId e = 0; e < m; ++e) {
        sets.push_back({{e}, {}});
        sets.push_back({{}, {e}});
        for (EdgeId f = 0; f < m; ++f) {
          if (f == e) continue;
          if (e < f) sets.push_back({{e, f}, {}});
          if (e < f) sets.push_back({{}, {e, f}});
          sets.push_back({{e}, {f}});
        }
      }
      for (const auto& [a, b] : sets) {
        worst = std::max(worst, check_spatial_markov(g, a, b).max_abs_deviation);
        ++cases;
      }
    }
    checks.push_back(counted("spatial_markov", worst, 1e-10,
                             std::to_string(cases) + " (A,B) pairs on 20 weighted K_4"));
  });

  const auto corpus = exact_corpus(o.corpus_size, 12, derive_seed(o.seed, 0xC0));

  guarded("cheeger_sandwich", [&] {
    std::size_t bad = 0;
    for (const auto& g : corpus) {
      const double phi = bottleneck_ratio(g).phi;
      const double t = static_cast<double>(mixing_time(g));
      const double pi_min = stationary(g).pi_min;
      if (t < 1.0 / (4.0 * phi) || t > 2.0 * std::log(2.0 / pi_min) / (phi * phi)) ++bad;
    }
    checks.push_back(counted("cheeger_sandwich", double(bad), 0.0,
                             "violations over " + std::to_string(corpus.size()) + " graphs"));
  });

  guarded("heat_cheeger", [&] {
    const double xis[] = {0.1, 0.5, 1.0};
    std::size_t bad = 0, total = 0;
    for (const auto& g : corpus) {
      const auto rep = heat_cheeger_check(g, xis);
      bad += rep.violations.size();
      total += rep.checks;
    }
    checks.push_back(counted("heat_cheeger", double(bad), 0.0,
                             "violations over " + std::to_string(total) + " (u,v,xi) checks"));
  });

  guarded("gap_law", [&] {
    const std::size_t m = 10;
    const double ts[] = {0.01, 0.05, 0.1};
    std::size_t above[3] = {0, 0, 0};
    Rng rng(derive_seed(o.seed, 0x6A9));
    std::vector<double> u(m);
    for (std::size_t r = 0; r < o.gap_replicates; ++r) {
      for (double& x : u) x = uniform_open01(rng);
      std::sort(u.begin(), u.end());
      double gap = 1.0;
      for (std::size_t i = 1; i < m; ++i) gap = std::min(gap, u[i] - u[i - 1]);
      for (int k = 0; k < 3; ++k) above[k] += gap > ts[k];
    }
    double worst = 0.0;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
      const double p = gap_law(m, ts[k]);
      const double sigma = std::sqrt(p * (1 - p) / double(o.gap_replicates));
      const double z = std::abs(double(above[k]) / double(o.gap_replicates) - p) / sigma;
      worst = std::max(worst, z);
      detail += "t=" + fmt(ts[k]) + " z=" + fmt(z) + " ";
    }
    checks.push_back(counted("gap_law", worst, 4.0, detail));
  });

  guarded("box_iso", [&] {
    const auto small = box_iso_check(2, 1, 0, o.seed);
    checks.push_back(counted("box_iso_3x3", double(small.violations), 0.0,
                             std::to_string(small.examined) + " subsets, exhaustive"));
    const auto big = box_iso_check(2, 2, o.box_samples, derive_seed(o.seed, 0xB0));
    checks.push_back(counted("box_iso_5x5", double(big.violations), 0.0,
                             std::to_string(big.examined) + " sampled subsets"));
  });
  return checks;
}

json to_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"value", c.value},
                   {"threshold", c.threshold},
                   {"status", c.status},
                   {"detail", c.detail},
                   {"seconds", c.seconds}});
  }
  return {{"version", kVersion}, {"passed", all_passed(checks)}, {"checks", arr}};
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.status != "fail"; });
}

json manifest(const ExperimentConfig& c, const std::string& kind, double wall_seconds,
              const json& extra) {
  json j = {{"kind", kind},
            {"version", kVersion},
            {"rng", std::string(kRngIdentifier)},
            {"config", to_json(c)},
            {"wall_seconds", wall_seconds}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace ustlab
