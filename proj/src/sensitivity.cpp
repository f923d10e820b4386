#include "aitg/sensitivity.hpp"

#include "aitg/calibration.hpp"
#include "aitg/digest.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace aitg {

const char* to_string(DistKind k) {
  switch (k) {
    case DistKind::UniformMultiplier: return "uniform-multiplier";
    case DistKind::UniformAdditive: return "uniform-additive";
    case DistKind::NormalAdditive: return "normal-additive";
    case DistKind::LognormalMultiplier: return "lognormal-multiplier";
  }
  return "?";
}

DistKind parse_dist_kind(const std::string& s) {
  for (DistKind k : {DistKind::UniformMultiplier, DistKind::UniformAdditive,
                     DistKind::NormalAdditive, DistKind::LognormalMultiplier})
    if (s == to_string(k)) return k;
  throw Error("sensitivity", "unknown distribution kind '" + s + "'");
}

void DistributionSpec::validate(const std::string& path) const {
  if (!std::isfinite(p1) || !std::isfinite(p2))
    throw Error("sensitivity", "distribution parameters must be finite", path);
  switch (kind) {
    case DistKind::UniformMultiplier:
      if (!(p1 >= 0.0 && p2 >= p1))
        throw Error("sensitivity", "uniform multiplier needs 0 <= lo <= hi", path);
      break;
    case DistKind::UniformAdditive:
    case DistKind::NormalAdditive:
    case DistKind::LognormalMultiplier:
      if (p1 < 0.0) throw Error("sensitivity", "scale must be nonnegative", path);
      break;
  }
}

bool DistributionSpec::degenerate() const {
  switch (kind) {
    case DistKind::UniformMultiplier: return p1 == 1.0 && p2 == 1.0;
    case DistKind::LognormalMultiplier: return p1 == 0.0 && p2 == 0.0;
    default: return p1 == 0.0;
  }
}

double DistributionSpec::sample(double base, std::mt19937_64& rng) const {
  double v = base;
  switch (kind) {
    case DistKind::UniformMultiplier:
      v = base * (p1 == p2 ? p1 : std::uniform_real_distribution<double>(p1, p2)(rng));
      break;
    case DistKind::UniformAdditive:
      if (p1 > 0.0) v = base + std::uniform_real_distribution<double>(-p1, p1)(rng);
      break;
    case DistKind::NormalAdditive:
      if (p1 > 0.0) v = base + std::normal_distribution<double>(0.0, p1)(rng);
      break;
    case DistKind::LognormalMultiplier:
      v = base * (p1 > 0.0 ? std::lognormal_distribution<double>(p2, p1)(rng) : std::exp(p2));
      break;
  }
  return std::max(v, floor);
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {

// Runs body(j) for j in [0, n) across `workers` threads; body writes only to
// slot j of caller-owned storage.
template <typename Body>
void parallel_for(std::size_t n, unsigned workers, Body body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t j = 0; j < n; ++j) body(j);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t j = w; j < n; j += workers) body(j);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

VecXd sample_inputs(const std::vector<McInputSpec>& inputs, std::mt19937_64& rng) {
  VecXd x(static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i)
    x(static_cast<Eigen::Index>(i)) = inputs[i].dist.sample(inputs[i].base, rng);
  return x;
}

void validate_inputs(const std::vector<McInputSpec>& inputs) {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    inputs[i].dist.validate("inputs[" + std::to_string(i) + "]" +
                            (inputs[i].name.empty() ? "" : " (" + inputs[i].name + ")"));
}

}  // namespace

double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error("sensitivity", "percentile of empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw Error("sensitivity", "percentile outside [0, 100]");
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double McSummary::at(double level) const {
  for (std::size_t i = 0; i < percentile_levels.size(); ++i)
    if (percentile_levels[i] == level) return percentile_values[i];
  throw Error("sensitivity", "percentile level not computed");
}

McSummary monte_carlo(const McModel& model, const std::vector<McInputSpec>& inputs,
                      const McConfig& cfg, bool keep_samples) {
  if (cfg.draws < 1) throw Error("sensitivity", "draw count must be at least 1");
  validate_inputs(inputs);
  std::vector<double> y(cfg.draws);
  parallel_for(cfg.draws, cfg.workers, [&](std::size_t j) {
    auto rng = substream(cfg.seed, 0, j);
    y[j] = model(sample_inputs(inputs, rng));
  });

  McSummary s;
  s.draws = cfg.draws;
  s.seed = cfg.seed;
  s.digest = sha256_hex(y.data(), y.size() * sizeof(double));
  std::vector<double> sorted = y;
  std::sort(sorted.begin(), sorted.end());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  s.percentile_levels = cfg.percentiles;
  for (double p : cfg.percentiles) s.percentile_values.push_back(percentile_sorted(sorted, p));
  if (keep_samples) s.samples = std::move(y);
  return s;
}

SobolResult sobol_first_order(const McModel& model, const std::vector<McInputSpec>& inputs,
                              std::size_t draws, std::uint64_t seed, unsigned workers) {
  if (inputs.size() < 2) throw Error("sensitivity", "Sobol analysis needs at least 2 inputs");
  if (draws < 1) throw Error("sensitivity", "draw count must be at least 1");
  validate_inputs(inputs);
  const std::size_t k = inputs.size();
  std::vector<VecXd> a(draws), b(draws);
  std::vector<double> fa(draws), fb(draws);
  std::vector<std::vector<double>> fab(k, std::vector<double>(draws));
  parallel_for(draws, workers, [&](std::size_t j) {
    auto ra = substream(seed, 1, j);
    auto rb = substream(seed, 2, j);
    a[j] = sample_inputs(inputs, ra);
    b[j] = sample_inputs(inputs, rb);
    fa[j] = model(a[j]);
    fb[j] = model(b[j]);
    for (std::size_t i = 0; i < k; ++i) {
      VecXd x = a[j];
      x(static_cast<Eigen::Index>(i)) = b[j](static_cast<Eigen::Index>(i));
      fab[i][j] = model(x);
    }
  });

  const double n = static_cast<double>(draws);
  double mean = 0.0;
  for (std::size_t j = 0; j < draws; ++j) mean += fa[j] + fb[j];
  mean /= 2.0 * n;
  double var = 0.0;
  for (std::size_t j = 0; j < draws; ++j)
    var += (fa[j] - mean) * (fa[j] - mean) + (fb[j] - mean) * (fb[j] - mean);
  var /= 2.0 * n;
  if (!(var > 0.0)) throw Error("sensitivity", "output variance is zero; indices undefined");

  SobolResult r;
  r.variance = var;
  for (std::size_t i = 0; i < k; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < draws; ++j) acc += fb[j] * (fab[i][j] - fa[j]);
    r.names.push_back(inputs[i].name);
    r.first_order.push_back(acc / n / var);
  }
  return r;
}

namespace {

// Rank 1 = largest value; equal values keep index order so ties are stable.
std::vector<int> descending_positions(const VecXd& v) {
  std::vector<int> order(static_cast<std::size_t>(v.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return v(i) > v(j); });
  std::vector<int> pos(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) pos[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
  return pos;
}

}  // namespace

RankStabilityResult weight_perturbation_rank_stability(const std::vector<RankItem>& items,
                                                       const Vec6d& base_weights,
                                                       double half_width, std::size_t draws,
                                                       std::uint64_t seed, unsigned workers) {
  if (items.size() < 2) throw Error("sensitivity", "rank stability needs at least 2 industries");
  if (half_width < 0.0) throw Error("sensitivity", "perturbation half-width must be nonnegative");
  if (draws < 1) throw Error("sensitivity", "draw count must be at least 1");
  validate_weights(base_weights);
  const auto n = static_cast<Eigen::Index>(items.size());

  auto ceilings = [&](const Vec6d& w) {
    VecXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& it = items[static_cast<std::size_t>(i)];
      v(i) = compute_iass(it.scores, w, it.psi);
    }
    return v;
  };
  const std::vector<int> base_pos = descending_positions(ceilings(base_weights));

  std::vector<std::vector<int>> positions(draws);
  parallel_for(draws, workers, [&](std::size_t j) {
    auto rng = substream(seed, 3, j);
    Vec6d w = base_weights;
    if (half_width > 0.0) {
      std::uniform_real_distribution<double> u(-half_width, half_width);
      for (int d = 0; d < 6; ++d) w(d) = std::max(base_weights(d) + u(rng), 1e-6);
      w /= w.sum();
    }
    positions[j] = descending_positions(ceilings(w));
  });

  RankStabilityResult r;
  for (const auto& it : items) r.ids.push_back(it.id);
  r.base_rank.resize(n);
  r.mean_rank = VecXd::Zero(n);
  r.swap_frequency = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) r.base_rank(i) = base_pos[static_cast<std::size_t>(i)] + 1;
  for (const auto& pos : positions) {
    for (Eigen::Index i = 0; i < n; ++i) r.mean_rank(i) += pos[static_cast<std::size_t>(i)] + 1;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
        const bool base_i_ahead = base_pos[si] < base_pos[sj];
        const bool now_i_ahead = pos[si] < pos[sj];
        if (base_i_ahead != now_i_ahead) {
          r.swap_frequency(i, j) += 1.0;
          ++r.total_swap_events;
        }
      }
  }
  const double m = static_cast<double>(draws);
  r.mean_rank /= m;
  r.swap_frequency /= m;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) r.swap_frequency(i, j) = r.swap_frequency(j, i);
  r.mean_abs_shift = (r.base_rank - r.mean_rank).cwiseAbs().mean();
  return r;
}

VecXd average_ranks(const VecXd& x) {
  const auto n = x.size();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x(a) < x(b); });
  VecXd r(n);
  for (Eigen::Index s = 0; s < n;) {
    Eigen::Index e = s;
    while (e + 1 < n && x(idx[static_cast<std::size_t>(e + 1)]) == x(idx[static_cast<std::size_t>(s)])) ++e;
    const double avg = 0.5 * static_cast<double>(s + e) + 1.0;
    for (Eigen::Index k = s; k <= e; ++k) r(idx[static_cast<std::size_t>(k)]) = avg;
    s = e + 1;
  }
  return r;
}

double spearman(const VecXd& x, const VecXd& y) {
  if (x.size() != y.size()) throw Error("sensitivity", "spearman inputs differ in length");
  if (x.size() < 2) throw Error("sensitivity", "spearman needs at least 2 observations");
  const VecXd rx = average_ranks(x), ry = average_ranks(y);
  const VecXd dx = rx.array() - rx.mean(), dy = ry.array() - ry.mean();
  const double sxx = dx.squaredNorm(), syy = dy.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) throw Error("sensitivity", "spearman undefined for a constant sequence");
  return dx.dot(dy) / std::sqrt(sxx * syy);
}

const char* to_string(ActionSignal a) {
  switch (a) {
    case ActionSignal::Invest: return "Invest";
    case ActionSignal::Monitor: return "Monitor";
    case ActionSignal::Diligence: return "Diligence";
    case ActionSignal::DoNotInvest: return "DoNotInvest";
  }
  return "?";
}

// Currency in billions.
ActionSignal action_signal(double p10, double p50, double vd_p50) {
  if (p10 > 1.0 && vd_p50 > 5.0) return ActionSignal::Invest;
  if (p50 > 0.0 && vd_p50 >= 2.5 && vd_p50 <= 5.0) return ActionSignal::Monitor;
  if (std::abs(p10) < 0.01 * std::abs(p50)) return ActionSignal::Diligence;
  return ActionSignal::DoNotInvest;
}

}  // namespace aitg
