#pragma once

#include "aitg/types.hpp"

#include <algorithm>
#include <cmath>

namespace aitg {

template <typename Scalar>
Scalar urgency_delta(Scalar c_t, Scalar c_0) {
  using std::max;
  using std::min;
  if (!(c_0 > Scalar(0))) throw Error("adri", "baseline capability must be positive");
  return max(Scalar(1), Scalar(1) + Scalar(0.5) * min(c_t / c_0 - Scalar(1), Scalar(1)));
}

// Switching costs, network effects, regulatory barriers, proprietary data.
template <typename Scalar>
struct MoatFactors {
  Eigen::Matrix<Scalar, 4, 1> scores = Eigen::Matrix<Scalar, 4, 1>::Zero();
  Eigen::Matrix<Scalar, 4, 1> weights = Eigen::Matrix<Scalar, 4, 1>::Constant(Scalar(0.25));
};

template <typename Scalar>
Scalar moat(const MoatFactors<Scalar>& m) {
  using std::abs;
  if ((m.scores.array() < Scalar(0)).any() || (m.scores.array() > Scalar(1)).any())
    throw Error("adri", "moat factors must lie in [0, 1]");
  if ((m.weights.array() < Scalar(0)).any() || abs(m.weights.sum() - Scalar(1)) > Scalar(1e-9))
    throw Error("adri", "moat weights must be nonnegative and sum to 1");
  return m.weights.dot(m.scores);
}

template <typename Scalar>
struct AdriConfig {
  Scalar normalization = Scalar(20.25);
  Scalar hazard_scale = Scalar(100);
};

template <typename Scalar>
Scalar adri(Scalar g_eff, Scalar cadr, Scalar moat_f, Scalar delta_t, const AdriConfig<Scalar>& cfg = {}) {
  if (!(cfg.normalization > Scalar(0) && cfg.hazard_scale > Scalar(0)))
    throw Error("adri", "normalization constants must be positive");
  if (g_eff < Scalar(0) || cadr < Scalar(0) || moat_f < Scalar(0) || moat_f > Scalar(1))
    throw Error("adri", "ADRI inputs out of range");
  const Scalar v = g_eff * cadr * (Scalar(1) - moat_f) * delta_t / cfg.normalization;
  return std::clamp(v, Scalar(0), Scalar(10));
}

// Annual hazard intensity.
template <typename Scalar>
Scalar hazard(Scalar adri_score, const AdriConfig<Scalar>& cfg = {}) {
  if (adri_score < Scalar(0) || adri_score > Scalar(10)) throw Error("adri", "ADRI outside [0, 10]");
  return adri_score / cfg.hazard_scale;
}

template <typename Scalar>
Scalar cumulative_displacement(Scalar adri_score, Scalar horizon_months,
                               const AdriConfig<Scalar>& cfg = {}) {
  using std::exp;
  if (horizon_months < Scalar(0)) throw Error("adri", "horizon must be nonnegative");
  return Scalar(1) - exp(-hazard(adri_score, cfg) * horizon_months / Scalar(12));
}

enum class AdriClass { Low, Moderate, High, Critical };

inline const char* to_string(AdriClass c) {
  switch (c) {
    case AdriClass::Low: return "Low";
    case AdriClass::Moderate: return "Moderate";
    case AdriClass::High: return "High";
    case AdriClass::Critical: return "Critical";
  }
  return "?";
}

template <typename Scalar>
AdriClass classify(Scalar adri_score) {
  if (adri_score < Scalar(2.5)) return AdriClass::Low;
  if (adri_score < Scalar(5.0)) return AdriClass::Moderate;
  if (adri_score < Scalar(7.0)) return AdriClass::High;
  return AdriClass::Critical;
}

}  // namespace aitg
