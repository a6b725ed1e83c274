#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ustlab/graph.hpp"
#include "ustlab/rng.hpp"

namespace ustlab {

// I.i.d. edge-weight law with support in (0, inf).
struct WeightLaw {
  enum class Kind {
    kUniform,      // a, b: uniform on (a, b), 0 <= a <= b
    kPareto,       // a = alpha, b = x_min
    kLogNormal,    // a = mu, b = sigma
    kExponential,  // a = lambda
    kConstant,     // a = c
    kDoubleExpInvUniform,  // w = exp(exp(1/U)), U uniform on (0, 1)
  };

  Kind kind = Kind::kConstant;
  double a = 1.0;
  double b = 0.0;

  static WeightLaw uniform(double lo, double hi) { return {Kind::kUniform, lo, hi}; }
  static WeightLaw pareto(double alpha, double x_min = 1.0) { return {Kind::kPareto, alpha, x_min}; }
  static WeightLaw lognormal(double mu, double sigma) { return {Kind::kLogNormal, mu, sigma}; }
  static WeightLaw exponential(double lambda) { return {Kind::kExponential, lambda, 0.0}; }
  static WeightLaw constant(double c) { return {Kind::kConstant, c, 0.0}; }
  static WeightLaw double_exp_inv_uniform() { return {Kind::kDoubleExpInvUniform, 0.0, 0.0}; }

  // Throws std::invalid_argument for parameters outside the law's domain.
  void validate() const;
  // Draws one log-weight. For kDoubleExpInvUniform, *u_out receives U.
  double draw_logw(Rng& rng, double* u_out = nullptr) const;
  std::string name() const;
};

// {"kind": "...", "params": {...}} with kinds uniform{a,b}, pareto{alpha,x_min},
// lognormal{mu,sigma}, exponential{lambda}, constant{c}, double_exp_inv_uniform{}.
WeightLaw weight_law_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WeightLaw& law);

// log w = exp(1/u), except that above 1/u = 700 the value is replaced by an
// order-preserving surrogate in [2e304, 1.7e308]. Every pair of log-weights in
// that regime differs by far more than the ~745 a double ratio can resolve, so
// all weight ratios (and hence the spanning-tree law) are unchanged.
double double_exp_inv_uniform_logw(double u);

struct WeightedDraw {
  WeightedMultiGraph graph;
  std::vector<double> uniforms;  // U_e per edge; only for kDoubleExpInvUniform
};

WeightedDraw assign_weights(const WeightedMultiGraph& g, const WeightLaw& law, std::uint64_t seed);

// Empirical p(A) = mu([1/A, A]) from `draws` samples, and the smallest A > 1
// attaining at least target_p.
double empirical_open_probability(const WeightLaw& law, double a, std::size_t draws,
                                  std::uint64_t seed);
double solve_threshold(const WeightLaw& law, double target_p, std::size_t draws,
                       std::uint64_t seed);

}  // namespace ustlab
