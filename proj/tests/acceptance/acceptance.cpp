// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ustlab/harness.hpp"

using namespace ustlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  double seconds = -1.0;  // measured elsewhere when >= 0
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string g4(double x) { return fmt("%.4g", x); }

const Check& find(const std::vector<Check>& checks, const std::string& name) {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("verify did not report " + name);
}

// Criteria 1-6 and 10 are the verify checks, run at their full sizes.
std::vector<Check> run_verify(std::uint64_t seed, std::size_t threads) {
  VerifyOptions o;
  o.seed = seed;
  o.threads = threads;
  return verify(o);
}

Outcome from_checks(const std::vector<Check>& checks, std::initializer_list<const char*> names) {
  Outcome out{true, "", 0.0};
  for (const char* name : names) {
    const Check& c = find(checks, name);
    out.pass = out.pass && c.status == "pass";
    out.seconds += c.seconds;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += std::string(name) + "=" + g4(c.value) + " (limit " + g4(c.threshold) + ", " +
                  c.status + ")";
  }
  return out;
}

ExperimentConfig expander_cell(const WeightLaw& law, std::vector<std::size_t> grid,
                               std::uint64_t seed, std::size_t threads) {
  ExperimentConfig c;
  c.family = Family::kRegular;
  c.degree = 3;
  c.law = law;
  c.grid = std::move(grid);
  c.trials = 100;
  c.seed = seed;
  c.threads = threads;
  return c;
}

Outcome criterion7(std::uint64_t seed, std::size_t threads) {
  const WeightLaw laws[] = {WeightLaw::constant(1.0), WeightLaw::uniform(0.5, 1.5),
                            WeightLaw::pareto(1.1)};
  Outcome out{true, ""};
  for (const auto& law : laws) {
    const auto res = run_scaling(expander_cell(law, {512, 1024, 2048, 4096, 8192}, seed, threads));
    const bool ok = res.fit.fitted && res.fit.slope >= 0.4 && res.fit.slope <= 0.6;
    out.pass = out.pass && ok;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += law.name() + " slope=" + fmt("%.3f", res.fit.slope) + " (r2 " +
                  fmt("%.3f", res.fit.r2) + ")";
  }
  out.detail += "; band [0.4, 0.6]";
  return out;
}

Outcome criterion8(std::uint64_t seed, std::size_t threads) {
  ExperimentConfig c;
  c.family = Family::kComplete;
  c.law = WeightLaw::double_exp_inv_uniform();
  c.grid = {128, 256, 512, 1024, 2048};
  c.trials = 200;
  c.agreement_grid = {16, 24, 32};
  c.agreement_trials = 200;
  c.seed = seed;
  c.threads = threads;
  const auto res = run_counterexample(c);
  Outcome out{true, ""};
  for (const auto& row : res.agreement) {
    out.pass = out.pass && row.frequency() >= 0.95;
    out.detail += "agree(n=" + std::to_string(row.n) + ")=" + fmt("%.3f", row.frequency()) + " ";
  }
  const bool band = res.fit.fitted && res.fit.slope >= 0.23 && res.fit.slope <= 0.43;
  out.pass = out.pass && band;
  out.detail += "(>= 0.95); MST slope=" + fmt("%.3f", res.fit.slope) + " in [0.23, 0.43]";
  return out;
}

ExperimentConfig pipeline_cell(std::size_t n, std::size_t trials, std::uint64_t seed,
                               std::size_t threads) {
  ExperimentConfig c;
  c.family = Family::kRegular;
  c.law = WeightLaw::lognormal(0.0, 1.0);
  c.grid = {n};
  c.trials = trials;
  c.target_p = 0.99;
  c.seed = seed;
  c.threads = threads;
  return c;
}

// At n = 4096 the expander B2 flag cannot be certified: its spectral lower
// bracket lambda_2/2 is below 1/log n for every 3-regular graph. B-event
// trials are therefore those with B1, B3, B4 and B2 not refuted by the sweep
// cut; the count with the conservative flag is reported alongside.
Outcome criterion9(std::uint64_t seed, std::size_t threads) {
  Outcome out{true, ""};
  const auto small = run_pipeline_probe(pipeline_cell(14, 200, seed, threads));
  std::size_t events = 0, above = 0;
  for (const auto& r : small.records) {
    if (!r.events.all()) continue;
    ++events;
    above += r.phi_gp.exact && r.phi_gp.lower > r.bound_phi;
  }
  out.pass = events > 0 && above == events;
  out.detail = "n=14: " + std::to_string(above) + "/" + std::to_string(events) +
               " B-event trials with exact Phi(G') above the bound (A=" + g4(small.a) + ")";

  const auto large = run_pipeline_probe(pipeline_cell(4096, 100, seed, threads));
  std::size_t b_events = 0, b_above = 0, strict = 0;
  double worst = INFINITY;
  for (const auto& r : large.records) {
    const auto& ev = r.events;
    strict += ev.all();
    if (!(ev.b1 && ev.b2_not_refuted && ev.b3 && ev.b4)) continue;
    ++b_events;
    b_above += r.phi_gp.lower > r.bound_phi;
    worst = std::min(worst, r.phi_gp.lower / r.bound_phi);
  }
  const bool ok = b_events > 0 && 100 * b_above >= 95 * b_events;
  out.pass = out.pass && ok;
  out.detail += "; n=4096: " + std::to_string(b_above) + "/" + std::to_string(b_events) +
                " B-event trials (B2 not refuted) with lower bracket above the bound, min ratio " +
                g4(worst) + "; conservative B2 holds in " + std::to_string(strict) + "/100";
  return out;
}

Outcome criterion11(std::uint64_t seed, std::size_t threads) {
  const auto c = expander_cell(WeightLaw::constant(1.0), {512}, seed, threads);
  const std::string a = scaling_csv(run_scaling(c).records);
  const std::string b = scaling_csv(run_scaling(c).records);
  auto one = c;
  one.threads = 1;
  const std::string s = scaling_csv(run_scaling(one).records);
  const bool same = a == b && a == s;
  return {same, std::to_string(a.size()) + " CSV bytes, rerun " + (a == b ? "identical" : "differs") +
                    ", single-thread " + (a == s ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ustlab acceptance suite"};
  std::uint64_t seed = 1;
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> only;
  app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  auto wanted = [&](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };

  std::vector<Check> checks;
  auto verify_checks = [&]() -> const std::vector<Check>& {
    if (checks.empty()) checks = run_verify(seed, threads);
    return checks;
  };

  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact-law agreement", 120,
       [&] { return from_checks(verify_checks(), {"sampler_tv_triangle", "sampler_tv_k4"}); }},
      {2, "spatial Markov", 60, [&] { return from_checks(verify_checks(), {"spatial_markov"}); }},
      {3, "Cayley", 1, [&] { return from_checks(verify_checks(), {"cayley"}); }},
      {4, "Cheeger sandwich", 120,
       [&] { return from_checks(verify_checks(), {"cheeger_sandwich"}); }},
      {5, "heat-kernel bound", 300, [&] { return from_checks(verify_checks(), {"heat_cheeger"}); }},
      {6, "gap law", 60, [&] { return from_checks(verify_checks(), {"gap_law"}); }},
      {7, "expander scaling", 1800, [&] { return criterion7(seed, threads); }},
      {8, "counter-example", 1200, [&] { return criterion8(seed, threads); }},
      {9, "pipeline bound", 900, [&] { return criterion9(seed, threads); }},
      {10, "edge isoperimetry", 120,
       [&] { return from_checks(verify_checks(), {"box_iso_3x3", "box_iso_5x5"}); }},
      {11, "determinism", 1800, [&] { return criterion11(seed, threads); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    // Criteria taken from the shared verify run report their own check times.
    const double secs =
        o.seconds >= 0.0
            ? o.seconds
            : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("%s criterion %d (%s): %s; %.1fs (limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.limit_seconds);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
