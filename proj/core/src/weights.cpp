#include "ustlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ustlab {

void WeightLaw::validate() const {
  auto fail = [&](const char* why) {
    throw std::invalid_argument("invalid " + name() + " law: " + why);
  };
  switch (kind) {
    case Kind::kUniform:
      // a = 0 is fine: draws use the open interval, so weights stay positive.
      if (!(a >= 0.0) || !(b >= a) || !(b > 0.0) || !std::isfinite(b)) {
        fail("need 0 <= a <= b < inf, b > 0");
      }
      break;
    case Kind::kPareto:
      if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        fail("need alpha > 0 and x_min > 0");
      }
      break;
    case Kind::kLogNormal:
      if (!std::isfinite(a) || !(b >= 0.0) || !std::isfinite(b)) fail("need finite mu, sigma >= 0");
      break;
    case Kind::kExponential:
      if (!(a > 0.0) || !std::isfinite(a)) fail("need lambda > 0");
      break;
    case Kind::kConstant:
      if (!(a > 0.0) || !std::isfinite(a)) fail("need c > 0");
      break;
    case Kind::kDoubleExpInvUniform:
      break;
  }
}

double double_exp_inv_uniform_logw(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("U must lie in (0, 1)");
  constexpr double kSwitch = 700.0;
  const double inv = 1.0 / u;
  if (inv <= kSwitch) return std::exp(inv);
  // Linear in u on (0, 1/700): 2e304 at the switch point, 1.7e308 as u -> 0.
  constexpr double lo = 2e304;
  constexpr double hi = 1.7e308;
  return lo + (hi - lo) * (1.0 - kSwitch * u);
}

double WeightLaw::draw_logw(Rng& rng, double* u_out) const {
  switch (kind) {
    case Kind::kUniform:
      return std::log(a + (b - a) * uniform_open01(rng));
    case Kind::kPareto:
      return std::log(b) - std::log(uniform_open01(rng)) / a;
    case Kind::kLogNormal: {
      std::normal_distribution<double> normal(a, b);
      return b == 0.0 ? a : normal(rng);
    }
    case Kind::kExponential:
      return std::log(-std::log(uniform_open01(rng)) / a);
    case Kind::kConstant:
      return std::log(a);
    case Kind::kDoubleExpInvUniform: {
      const double u = uniform_open01(rng);
      if (u_out) *u_out = u;
      return double_exp_inv_uniform_logw(u);
    }
  }
  throw std::logic_error("unhandled weight law");
}

std::string WeightLaw::name() const {
  switch (kind) {
    case Kind::kUniform: return "uniform";
    case Kind::kPareto: return "pareto";
    case Kind::kLogNormal: return "lognormal";
    case Kind::kExponential: return "exponential";
    case Kind::kConstant: return "constant";
    case Kind::kDoubleExpInvUniform: return "double_exp_inv_uniform";
  }
  return "unknown";
}

WeightLaw weight_law_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  auto get = [&](const char* key) {
    if (!params.contains(key)) {
      throw std::invalid_argument("weight law '" + kind + "' needs parameter '" + key + "'");
    }
    return params.at(key).get<double>();
  };
  WeightLaw law;
  if (kind == "uniform") {
    law = WeightLaw::uniform(get("a"), get("b"));
  } else if (kind == "pareto") {
    law = WeightLaw::pareto(get("alpha"), params.value("x_min", 1.0));
  } else if (kind == "lognormal") {
    law = WeightLaw::lognormal(params.value("mu", 0.0), get("sigma"));
  } else if (kind == "exponential") {
    law = WeightLaw::exponential(get("lambda"));
  } else if (kind == "constant") {
    law = WeightLaw::constant(get("c"));
  } else if (kind == "double_exp_inv_uniform") {
    law = WeightLaw::double_exp_inv_uniform();
  } else {
    throw std::invalid_argument("unknown weight law kind '" + kind + "'");
  }
  law.validate();
  return law;
}

nlohmann::json to_json(const WeightLaw& law) {
  nlohmann::json params = nlohmann::json::object();
  switch (law.kind) {
    case WeightLaw::Kind::kUniform: params = {{"a", law.a}, {"b", law.b}}; break;
    case WeightLaw::Kind::kPareto: params = {{"alpha", law.a}, {"x_min", law.b}}; break;
    case WeightLaw::Kind::kLogNormal: params = {{"mu", law.a}, {"sigma", law.b}}; break;
    case WeightLaw::Kind::kExponential: params = {{"lambda", law.a}}; break;
    case WeightLaw::Kind::kConstant: params = {{"c", law.a}}; break;
    case WeightLaw::Kind::kDoubleExpInvUniform: break;
  }
  return {{"kind", law.name()}, {"params", params}};
}

WeightedDraw assign_weights(const WeightedMultiGraph& g, const WeightLaw& law,
                            std::uint64_t seed) {
  law.validate();
  Rng rng(seed);
  std::vector<double> logw(g.num_edges());
  WeightedDraw out;
  const bool keep_u = law.kind == WeightLaw::Kind::kDoubleExpInvUniform;
  if (keep_u) out.uniforms.resize(g.num_edges());
  for (std::size_t e = 0; e < logw.size(); ++e) {
    logw[e] = law.draw_logw(rng, keep_u ? &out.uniforms[e] : nullptr);
  }
  out.graph = g.with_log_weights(logw);
  return out;
}

double empirical_open_probability(const WeightLaw& law, double a, std::size_t draws,
                                  std::uint64_t seed) {
  if (!(a > 1.0)) throw std::invalid_argument("threshold A must exceed 1");
  law.validate();
  Rng rng(seed);
  const double la = std::log(a);
  std::size_t open = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = law.draw_logw(rng);
    if (x >= -la && x <= la) ++open;
  }
  return draws == 0 ? 0.0 : static_cast<double>(open) / static_cast<double>(draws);
}

double solve_threshold(const WeightLaw& law, double target_p, std::size_t draws,
                       std::uint64_t seed) {
  if (!(target_p > 0.0 && target_p <= 1.0)) throw std::invalid_argument("target p must lie in (0, 1]");
  if (draws == 0) throw std::invalid_argument("need at least one draw");
  law.validate();
  Rng rng(seed);
  std::vector<double> mag(draws);
  for (double& x : mag) x = std::abs(law.draw_logw(rng));
  // Bisection over the sorted magnitudes: smallest index k with (k+1)/N >= target.
  std::sort(mag.begin(), mag.end());
  std::size_t lo = 0, hi = draws - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (static_cast<double>(mid + 1) >= target_p * static_cast<double>(draws)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double a = std::exp(mag[lo]) * (1.0 + 1e-12);
  return std::max(a, 1.0 + 1e-9);
}

}  // namespace ustlab
