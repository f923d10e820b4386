#pragma once

#include "aitg/types.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace aitg {

enum class DistKind { UniformMultiplier, UniformAdditive, NormalAdditive, LognormalMultiplier };

const char* to_string(DistKind k);
DistKind parse_dist_kind(const std::string& s);

// UniformMultiplier: base * U[p1, p2]
// UniformAdditive:   base + U[-p1, p1]
// NormalAdditive:    base + N(0, p1)
// LognormalMultiplier: base * LogNormal(p2, p1)   (p1 = sigma, p2 = mu)
// Results are clamped below at `floor`.
struct DistributionSpec {
  DistKind kind = DistKind::NormalAdditive;
  double p1 = 0.0;
  double p2 = 0.0;
  double floor = -std::numeric_limits<double>::infinity();

  void validate(const std::string& path) const;
  bool degenerate() const;
  double sample(double base, std::mt19937_64& rng) const;
};

struct McInputSpec {
  std::string name;
  double base = 0.0;
  DistributionSpec dist;
};

// Random engine for one draw, keyed by (seed, stream, index) only.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct McConfig {
  std::size_t draws = 10000;
  std::uint64_t seed = 20250101;
  unsigned workers = 1;
  std::vector<double> percentiles{10.0, 50.0, 90.0};
};

using McModel = std::function<double(const VecXd&)>;

struct McSummary {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::vector<double> percentile_levels;
  std::vector<double> percentile_values;
  double mean = 0.0;
  std::string digest;  // hex digest over the ordered raw draws
  std::vector<double> samples;

  double at(double level) const;
};

// Linear interpolation between order statistics of a sorted sample.
double percentile_sorted(const std::vector<double>& sorted, double p);

// Evaluates `model` on the sampled input vectors. Draw j depends only on
// (seed, j), and reported statistics come from the sorted sample, so the
// result is independent of the worker count.
McSummary monte_carlo(const McModel& model, const std::vector<McInputSpec>& inputs,
                      const McConfig& cfg, bool keep_samples = false);

struct SobolResult {
  std::vector<std::string> names;
  std::vector<double> first_order;
  double variance = 0.0;
};

// First-order indices with the pick-and-freeze estimator over two independent
// sample matrices A and B: S_i = mean(f(B) * (f(A_B^i) - f(A))) / Var(f).
SobolResult sobol_first_order(const McModel& model, const std::vector<McInputSpec>& inputs,
                              std::size_t draws, std::uint64_t seed, unsigned workers = 1);

struct RankItem {
  std::string id;
  Vec6d scores;
  double psi = 1.0;
};

struct RankStabilityResult {
  std::vector<std::string> ids;
  VecXd base_rank;       // 1 = highest ceiling
  VecXd mean_rank;
  double mean_abs_shift = 0.0;
  Eigen::MatrixXd swap_frequency;  // (i, j): share of draws where the base order of i, j flips
  std::size_t total_swap_events = 0;
};

// Each weight is drawn uniformly within +-half_width of its base value, then
// the vector is renormalized to the simplex.
RankStabilityResult weight_perturbation_rank_stability(const std::vector<RankItem>& items,
                                                       const Vec6d& base_weights,
                                                       double half_width, std::size_t draws,
                                                       std::uint64_t seed, unsigned workers = 1);

// Average ranks (1-based) with ties sharing the mean of their positions.
VecXd average_ranks(const VecXd& x);
double spearman(const VecXd& x, const VecXd& y);

enum class ActionSignal { Invest, Monitor, Diligence, DoNotInvest };
const char* to_string(ActionSignal a);
ActionSignal action_signal(double p10, double p50, double vd_p50);

}  // namespace aitg
