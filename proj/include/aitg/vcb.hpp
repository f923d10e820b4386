#pragma once

#include "aitg/types.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <functional>
#include <string>
#include <vector>

namespace aitg {

struct ValuePoolSpec {
  std::string name;
  double uplift = 0.0;  // baseline fraction of revenue
  double kappa = 0.0;   // base capture
  std::vector<FirmDim> dims;
  VecXd alpha;          // weights over dims; equal when empty
  std::optional<std::array<double, 2>> uplift_range;
};

void validate_pool(const ValuePoolSpec& p, const std::string& path);

// Logistic in log revenue relative to the critical scale; vendor-only stacks
// are capped.
template <typename Scalar>
Scalar firm_scale(Scalar revenue, Scalar s_star, Scalar alpha = Scalar(2), bool vendor_only = false,
                  Scalar vendor_cap = Scalar(0.65)) {
  using std::exp;
  using std::log;
  using std::min;
  if (!(revenue > Scalar(0) && s_star > Scalar(0)))
    throw Error("vcb", "revenue and critical scale must be positive");
  const Scalar phi = Scalar(1) / (Scalar(1) + exp(-alpha * log(revenue / s_star)));
  return vendor_only ? min(phi, vendor_cap) : phi;
}

template <typename Scalar>
struct CesConfig {
  Scalar rho = Scalar(5);
  Scalar floor = Scalar(0.01);
};

// (sum alpha_d e_d^-rho)^(-1/rho) with inputs floored. Evaluated in log space
// so that large rho cannot overflow and small rho keeps full precision.
template <typename Scalar>
Scalar ces_bottleneck(const VecX<Scalar>& e, const VecX<Scalar>& alpha,
                      const CesConfig<Scalar>& cfg = {}) {
  using std::abs;
  using std::exp;
  using std::expm1;
  using std::log;
  using std::log1p;
  if (e.size() == 0 || e.size() != alpha.size())
    throw Error("vcb", "CES inputs and weights must be nonempty and equal length");
  if (!(cfg.rho > Scalar(0))) throw Error("vcb", "CES rho must be positive");
  if ((alpha.array() < Scalar(0)).any() || abs(alpha.sum() - Scalar(1)) > Scalar(1e-9))
    throw Error("vcb", "CES weights must be nonnegative and sum to 1");
  const VecX<Scalar> x = -cfg.rho * e.array().max(cfg.floor).log().matrix();
  Scalar log_sum;
  if (x.cwiseAbs().maxCoeff() < Scalar(1)) {
    Scalar acc(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += alpha(i) * expm1(x(i));
    log_sum = log1p(acc);
  } else {
    const Scalar m = x.maxCoeff();
    Scalar acc(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += alpha(i) * exp(x(i) - m);
    log_sum = m + log(acc);
  }
  return exp(-log_sum / cfg.rho);
}

template <typename Scalar>
VecX<Scalar> equal_weights(Eigen::Index n) {
  return VecX<Scalar>::Constant(n, Scalar(1) / Scalar(n));
}

template <typename Scalar>
Scalar gap_fraction(Scalar g_eff, Scalar lambda = Scalar(3.5)) {
  using std::exp;
  if (g_eff < Scalar(0)) throw Error("vcb", "effective gap must be nonnegative");
  return Scalar(1) - exp(-lambda * g_eff / Scalar(10));
}

template <typename Scalar>
Scalar capture(Scalar g_eff, Scalar kappa, Scalar b, Scalar lambda = Scalar(3.5)) {
  return kappa * b * gap_fraction(g_eff, lambda);
}

template <typename Scalar>
Scalar pool_value(Scalar revenue, Scalar uplift, Scalar phi, Scalar capture_p) {
  return revenue * uplift * phi * capture_p;
}

template <typename Scalar>
VecX<Scalar> rescale_captures(const VecX<Scalar>& c) {
  if ((c.array() < Scalar(0)).any()) throw Error("vcb", "captures must be nonnegative");
  const Scalar s = c.sum();
  return s > Scalar(1) ? VecX<Scalar>(c / s) : c;
}

template <typename Scalar>
Scalar ramp(Scalar t, Scalar t50, Scalar k_ramp = Scalar(0.18)) {
  using std::exp;
  return Scalar(1) / (Scalar(1) + exp(-k_ramp * (t - t50)));
}

template <typename Scalar>
Scalar delta_r(Scalar t_hat, Scalar t50, Scalar hold = Scalar(60), Scalar k_ramp = Scalar(0.18)) {
  if (!(hold > Scalar(0))) throw Error("vcb", "hold period must be positive");
  return ramp(t_hat + hold, t50, k_ramp) - ramp(t_hat, t50, k_ramp);
}

template <typename Scalar>
struct CostYear {
  Scalar capex = Scalar(0);
  Scalar opex = Scalar(0);
};

template <typename Scalar>
Scalar npv_cost(const std::vector<CostYear<Scalar>>& streams, Scalar wacc) {
  using std::pow;
  if (!(wacc > Scalar(-1))) throw Error("vcb", "WACC must exceed -1");
  Scalar npv(0);
  for (std::size_t t = 0; t < streams.size(); ++t)
    npv += (streams[t].capex + streams[t].opex) / pow(Scalar(1) + wacc, Scalar(t + 1));
  return npv;
}

template <typename Scalar>
Scalar terminal_value(Scalar pool_sum, Scalar dr, Scalar multiple, Scalar ifs) {
  return pool_sum * dr * multiple * ifs;
}

template <typename Scalar>
Scalar fcf_interim(Scalar pool_sum, Scalar t_hat, Scalar t50, Scalar ifs_resid, Scalar wacc,
                   Scalar k_ramp = Scalar(0.18), int years = 5) {
  using std::pow;
  if (!(wacc > Scalar(-1))) throw Error("vcb", "WACC must exceed -1");
  const Scalar r0 = ramp(t_hat, t50, k_ramp);
  Scalar acc(0);
  for (int y = 1; y <= years; ++y)
    acc += pool_sum * (ramp(t_hat + Scalar(12 * y), t50, k_ramp) - r0) * ifs_resid /
           pow(Scalar(1) + wacc, Scalar(y));
  return acc;
}

template <typename Scalar>
Scalar delta_ev(Scalar tv, Scalar fcf, Scalar npv) {
  return tv + fcf - npv;
}

enum class VdTier { Tier1, Tier2, Tier3 };
const char* to_string(VdTier t);

struct ValueDensity {
  double multiple;
  VdTier tier;
};

ValueDensity value_density(double delta_ev, double impl_cost);

// Central difference of a scalar pipeline closure at c_t.
double dev_dct(const std::function<double(double)>& pipeline, double c_t, double step);

}  // namespace aitg
