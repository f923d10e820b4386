#include "aitg/vcb.hpp"

namespace aitg {

void validate_pool(const ValuePoolSpec& p, const std::string& path) {
  if (p.name.empty()) throw Error("vcb", "pool name is empty", path + ".name");
  if (!(p.kappa > 0.0 && p.kappa <= 1.0))
    throw Error("vcb", "base capture must lie in (0, 1]", path + ".kappa");
  if (!(p.uplift >= 0.0)) throw Error("vcb", "uplift must be nonnegative", path + ".uplift");
  if (p.uplift_range) {
    const auto [lo, hi] = *p.uplift_range;
    if (!(lo >= 0.0 && lo <= hi)) throw Error("vcb", "uplift range must be ordered and nonnegative", path + ".uplift_range");
    if (p.uplift < lo || p.uplift > hi)
      throw Error("vcb", "uplift lies outside its declared range", path + ".uplift");
  }
  if (p.dims.empty()) throw Error("vcb", "pool must gate at least one dimension", path + ".dims");
  if (p.alpha.size() != 0) {
    if (p.alpha.size() != static_cast<Eigen::Index>(p.dims.size()))
      throw Error("vcb", "alpha length must match dims", path + ".alpha");
    if ((p.alpha.array() < 0.0).any() || std::abs(p.alpha.sum() - 1.0) > 1e-9)
      throw Error("vcb", "alpha must be nonnegative and sum to 1", path + ".alpha");
  }
}

const char* to_string(VdTier t) {
  switch (t) {
    case VdTier::Tier1: return "Tier1";
    case VdTier::Tier2: return "Tier2";
    case VdTier::Tier3: return "Tier3";
  }
  return "?";
}

ValueDensity value_density(double delta_ev, double impl_cost) {
  if (!(impl_cost > 0.0)) throw Error("vcb", "implementation cost must be positive");
  const double vd = delta_ev / impl_cost;
  const VdTier tier = vd >= 2.0 ? VdTier::Tier1 : (vd >= 1.0 ? VdTier::Tier2 : VdTier::Tier3);
  return {vd, tier};
}

double dev_dct(const std::function<double(double)>& pipeline, double c_t, double step) {
  if (!(step > 0.0)) throw Error("vcb", "finite-difference step must be positive");
  return (pipeline(c_t + step) - pipeline(c_t - step)) / (2.0 * step);
}

}  // namespace aitg
