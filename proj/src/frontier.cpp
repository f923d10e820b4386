#include "aitg/frontier.hpp"

#include <functional>
#include <numeric>

namespace aitg {

std::vector<std::string> rotation_check(const std::vector<BenchmarkSolveRates>& panel) {
  if (panel.empty()) throw Error("frontier", "empty benchmark panel");
  std::vector<std::string> flagged;
  for (const auto& b : panel) {
    if (b.top_model_rates.empty())
      throw Error("frontier", "benchmark '" + b.name + "' has no model scores");
    std::vector<double> r = b.top_model_rates;
    for (double v : r)
      if (v < 0.0 || v > 1.0) throw Error("frontier", "solve rate outside [0, 1] for " + b.name);
    std::sort(r.begin(), r.end(), std::greater<>());
    if (r.size() > 5) r.resize(5);
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    if (mean > kSaturationThreshold) flagged.push_back(b.name);
  }
  return flagged;
}

ChainLinkResult chain_link(const VecXd& pre, const VecXd& post, Eigen::Index pre_begin,
                           Eigen::Index post_begin, Eigen::Index length) {
  if (length <= 0) throw Error("frontier", "empty overlap window");
  if (pre_begin < 0 || post_begin < 0 || pre_begin + length > pre.size() ||
      post_begin + length > post.size())
    throw Error("frontier", "overlap window out of range");
  const double pre_mean = pre.segment(pre_begin, length).mean();
  const double post_mean = post.segment(post_begin, length).mean();
  if (post_mean == 0.0) throw Error("frontier", "post-overlap mean is zero");
  ChainLinkResult out;
  out.scale = pre_mean / post_mean;
  out.series = post * out.scale;
  return out;
}

}  // namespace aitg
