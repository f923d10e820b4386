#pragma once

#include "aitg/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace aitg {

// Capability domain weights (seven benchmark domains).
template <typename Scalar>
VecX<Scalar> default_capability_weights() {
  VecX<Scalar> w(7);
  w << Scalar(0.20), Scalar(0.15), Scalar(0.15), Scalar(0.10), Scalar(0.15), Scalar(0.15),
      Scalar(0.10);
  return w;
}

template <typename Scalar>
struct CapabilityBasket {
  VecX<Scalar> scores;
  VecX<Scalar> weights;
};

template <typename Scalar>
Scalar capability_index(const CapabilityBasket<Scalar>& basket) {
  using std::abs;
  if (basket.scores.size() != basket.weights.size() || basket.scores.size() == 0)
    throw Error("frontier", "basket scores and weights must be nonempty and equal length");
  if ((basket.weights.array() <= Scalar(0)).any())
    throw Error("frontier", "capability weights must be positive");
  if (abs(basket.weights.sum() - Scalar(1)) > Scalar(1e-9))
    throw Error("frontier", "capability weights must sum to 1");
  if ((basket.scores.array() < Scalar(0)).any() || (basket.scores.array() > Scalar(1)).any())
    throw Error("frontier", "benchmark scores must lie in [0, 1]");
  return basket.weights.dot(basket.scores);
}

// s_0 = r_0, s_t = lambda r_t + (1 - lambda) s_{t-1}.
template <typename Scalar>
VecX<Scalar> ewma_smooth(const VecX<Scalar>& raw, Scalar lambda = Scalar(0.5)) {
  if (raw.size() == 0) throw Error("frontier", "empty capability series");
  if (!(lambda > Scalar(0) && lambda <= Scalar(1)))
    throw Error("frontier", "smoothing lambda outside (0, 1]");
  VecX<Scalar> s(raw.size());
  s(0) = raw(0);
  for (Eigen::Index t = 1; t < raw.size(); ++t) s(t) = lambda * raw(t) + (Scalar(1) - lambda) * s(t - 1);
  return s;
}

template <typename Scalar>
struct AfcConfig {
  Scalar c0 = Scalar(1);
  Scalar alpha_max = Scalar(1.35);
};

// Capped linear multiplier; drops below 1 when capability regresses.
template <typename Scalar>
Scalar compute_afc(Scalar theta, Scalar c_t, const AfcConfig<Scalar>& cfg = {}) {
  using std::min;
  if (!(c_t > Scalar(0))) throw Error("frontier", "capability index must be positive");
  if (cfg.alpha_max < Scalar(1)) throw Error("frontier", "alpha_max must be at least 1");
  return min(Scalar(1) + theta * (c_t - cfg.c0), cfg.alpha_max);
}

template <typename Scalar>
Scalar adjusted_ceiling(Scalar iass_base, Scalar afc) {
  if (!(iass_base > Scalar(0) && afc > Scalar(0)))
    throw Error("frontier", "ceiling inputs must be positive");
  return iass_base * afc;
}

template <typename Scalar>
struct ThetaState {
  Scalar theta = Scalar(0.2);
  Scalar eta = Scalar(0.30);
  Scalar stall_epsilon = Scalar(0.005);
  Scalar lower = Scalar(0.05);
  Scalar upper = Scalar(1.50);
};

template <typename Scalar>
Scalar update_theta(const ThetaState<Scalar>& s, Scalar delta_atd, Scalar delta_c) {
  if (delta_c < s.stall_epsilon) return s.theta;
  const Scalar next = s.theta + s.eta * (delta_atd / delta_c);
  return std::clamp(next, s.lower, s.upper);
}

template <typename Scalar>
struct WeightedTask {
  Scalar weight;
  bool automatable;
};

template <typename Scalar>
Scalar compute_atd(const std::vector<WeightedTask<Scalar>>& tasks) {
  Scalar total(0), flagged(0);
  for (const auto& t : tasks) {
    if (t.weight < Scalar(0)) throw Error("frontier", "task weight must be nonnegative");
    total += t.weight;
    if (t.automatable) flagged += t.weight;
  }
  if (!(total > Scalar(0))) throw Error("frontier", "total task weight is zero");
  return flagged / total;
}

template <typename Scalar>
struct ScenarioSet {
  Scalar conservative = Scalar(1.04);
  Scalar base = Scalar(1.10);
  Scalar aggressive = Scalar(1.22);
  Scalar w_conservative = Scalar(0.20);
  Scalar w_base = Scalar(0.60);
  Scalar w_aggressive = Scalar(0.20);

  Scalar expected() const {
    return w_conservative * conservative + w_base * base + w_aggressive * aggressive;
  }
};

template <typename Scalar>
Scalar scenario_uq(const ScenarioSet<Scalar>& s) {
  using std::abs;
  if (!(s.conservative <= s.base && s.base <= s.aggressive))
    throw Error("frontier", "scenarios must satisfy conservative <= base <= aggressive");
  if (abs(s.w_conservative + s.w_base + s.w_aggressive - Scalar(1)) > Scalar(1e-9))
    throw Error("frontier", "scenario weights must sum to 1");
  return (s.aggressive - s.conservative) / Scalar(4);
}

struct BenchmarkSolveRates {
  std::string name;
  std::vector<double> top_model_rates;  // up to five leading models
};

inline constexpr double kSaturationThreshold = 0.90;

// Names of benchmarks whose mean top-model solve rate strictly exceeds 0.90.
std::vector<std::string> rotation_check(const std::vector<BenchmarkSolveRates>& panel);

struct ChainLinkResult {
  VecXd series;  // rescaled post series
  double scale = 1.0;
};

// Rescale `post` by mean(pre[overlap]) / mean(post[overlap]). Overlap windows
// are index ranges [begin, end) into each series.
ChainLinkResult chain_link(const VecXd& pre, const VecXd& post, Eigen::Index pre_begin,
                           Eigen::Index post_begin, Eigen::Index length);

}  // namespace aitg
