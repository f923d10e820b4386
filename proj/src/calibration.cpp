#include "aitg/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aitg {

FirmDim parse_firm_dim(std::string_view name) {
  for (std::size_t i = 0; i < kFirmDimNames.size(); ++i)
    if (kFirmDimNames[i] == name) return static_cast<FirmDim>(i);
  throw Error("input", "unknown firm dimension '" + std::string(name) + "'");
}

void validate_industry(const IndustryCalibration& ind, const std::string& path) {
  if (ind.id.empty()) throw Error("calibration", "industry id is empty", path + ".id");
  for (int d = 0; d < 6; ++d) {
    const double s = ind.scores(d);
    if (!(s >= kMinEntryScore && s <= 10.0))
      throw Error("calibration", "dimension score must lie in [0.1, 10]",
                  path + ".scores." + std::string(kIndustryDimNames[d]));
  }
  if (!(ind.psi > 0.0 && ind.psi <= 1.0))
    throw Error("calibration", "psi must lie in (0, 1]", path + ".psi");
  if (!(ind.theta >= kThetaMin && ind.theta <= kThetaMax))
    throw Error("calibration", "theta outside [0.05, 1.50]", path + ".theta");
  if (!(ind.s_star > 0.0)) throw Error("calibration", "s_star must be positive", path + ".s_star");
  if (!(ind.exit_multiple >= 0.0))
    throw Error("calibration", "exit multiple must be nonnegative", path + ".exit_multiple");
}

double nearest_rank_percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("calibration", "percentile of empty sample");
  if (!(p > 0.0 && p <= 100.0)) throw Error("calibration", "percentile outside (0, 100]");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<double> normalize_minmax(const RawIndicatorPanel& panel) {
  if (panel.values.size() < 2) throw Error("calibration", "panel needs at least 2 industries");
  std::vector<double> x = panel.values;
  if (panel.winsorize) {
    const double lo = nearest_rank_percentile(x, panel.lower_pct);
    const double hi = nearest_rank_percentile(x, panel.upper_pct);
    for (double& v : x) v = std::clamp(v, lo, hi);
  }
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = *mn, range = *mx - *mn;
  if (!(range > 0.0)) throw Error("calibration", "degenerate panel: all values equal");
  for (double& v : x) v = std::clamp(10.0 * (v - lo) / range, 0.0, 10.0);
  return x;
}

double compute_ctd(const std::vector<Occupation>& occupations) {
  double total = 0.0, acc = 0.0;
  for (const auto& o : occupations) {
    if (o.employment < 0.0) throw Error("calibration", "negative employment");
    if (o.automatable_share < 0.0 || o.automatable_share > 1.0)
      throw Error("calibration", "automatable share outside [0, 1]");
    total += o.employment;
    acc += o.employment * o.automatable_share;
  }
  if (!(total > 0.0)) throw Error("calibration", "total employment is zero");
  return acc / total;
}

double compute_rti(const RtiMeasures& m) {
  for (double v : {m.dcp, m.ged_math, m.sts, m.fingdex, m.eyehand})
    if (!(v > 0.0)) throw Error("calibration", "RTI components must be positive");
  const double t_a = 0.5 * (m.dcp + m.ged_math);
  const double t_r = 0.5 * (m.sts + m.fingdex);
  return std::log(t_r) - std::log(t_a) - std::log(m.eyehand);
}

double compute_task_entropy(const std::vector<double>& freqs) {
  double sum = 0.0, h = 0.0;
  for (double f : freqs) {
    if (f < 0.0) throw Error("calibration", "negative task frequency");
    sum += f;
    if (f > 0.0) h -= f * std::log(f);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("calibration", "task frequencies must sum to 1");
  return h;
}

}  // namespace aitg
