#pragma once

#include "aitg/types.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace aitg {

// Industry dimension weights, in IndustryDim order.
template <typename Scalar>
Vec6<Scalar> default_industry_weights() {
  Vec6<Scalar> w;
  w << Scalar(0.25), Scalar(0.20), Scalar(0.20), Scalar(0.15), Scalar(0.10), Scalar(0.10);
  return w;
}

template <typename Scalar>
void validate_weights(const Vec6<Scalar>& w) {
  using std::abs;
  if ((w.array() <= Scalar(0)).any()) throw Error("calibration", "weights must be positive");
  if (abs(w.sum() - Scalar(1)) > Scalar(1e-9)) throw Error("calibration", "weights must sum to 1");
}

// Scalar regulatory floor: min(1, (rff/5)^1.5).
template <typename Scalar>
Scalar compute_psi(Scalar rff) {
  using std::pow;
  if (!(rff >= Scalar(0) && rff <= Scalar(10)))
    throw Error("calibration", "RFF score outside [0, 10]");
  if (rff >= Scalar(5)) return Scalar(1);
  return pow(rff / Scalar(5), Scalar(1.5));
}

// Multi-floor form: product of per-constraint floor coefficients, each in (0, 1].
template <typename Scalar>
Scalar compute_psi_product(const VecX<Scalar>& floors) {
  if (floors.size() == 0) return Scalar(1);
  if ((floors.array() <= Scalar(0)).any() || (floors.array() > Scalar(1)).any())
    throw Error("calibration", "floor coefficients must lie in (0, 1]");
  return floors.prod();
}

// Weighted geometric mean of the six scores, times psi.
template <typename Scalar>
Scalar compute_iass(const Vec6<Scalar>& scores, const Vec6<Scalar>& weights, Scalar psi) {
  using std::exp;
  validate_weights(weights);
  if ((scores.array() <= Scalar(0)).any())
    throw Error("calibration", "dimension scores must be strictly positive");
  if (!(psi > Scalar(0) && psi <= Scalar(1))) throw Error("calibration", "psi outside (0, 1]");
  return psi * exp(weights.dot(scores.array().log().matrix()));
}

template <typename Scalar>
Scalar compute_iass(const Vec6<Scalar>& scores, Scalar psi) {
  return compute_iass(scores, default_industry_weights<Scalar>(), psi);
}

struct IndustryCalibration {
  std::string id;
  std::string naics;
  std::string name;
  Vec6d scores = Vec6d::Zero();  // IndustryDim order
  double psi = 1.0;
  double theta = 0.1;
  double s_star = 1.0;         // currency, billions
  double exit_multiple = 10.0;
  std::optional<double> iass_published;
  std::optional<double> iass_star_published;
  std::vector<std::string> assumed_fields;

  double cadr() const { return scores(index_of(IndustryDim::CADR)); }
  double rff() const { return scores(index_of(IndustryDim::RFF)); }
  double iass_base(const Vec6d& weights = default_industry_weights<double>()) const {
    return compute_iass(scores, weights, psi);
  }
};

inline constexpr double kThetaMin = 0.05;
inline constexpr double kThetaMax = 1.50;
inline constexpr double kMinEntryScore = 0.1;

// Throws with a field path rooted at `path` when an invariant fails.
void validate_industry(const IndustryCalibration& ind, const std::string& path);

struct RawIndicatorPanel {
  std::vector<double> values;
  bool winsorize = false;
  double lower_pct = 5.0;
  double upper_pct = 95.0;
};

// Nearest-rank percentile on the sorted sample (p in (0, 100]).
double nearest_rank_percentile(std::vector<double> values, double p);

// Min-max onto [0, 10], after optional nearest-rank winsorization.
std::vector<double> normalize_minmax(const RawIndicatorPanel& panel);

struct Occupation {
  double employment = 0.0;
  double automatable_share = 0.0;
};
double compute_ctd(const std::vector<Occupation>& occupations);

struct RtiMeasures {
  double dcp = 1.0;
  double ged_math = 1.0;
  double sts = 1.0;
  double fingdex = 1.0;
  double eyehand = 1.0;
};
double compute_rti(const RtiMeasures& m);

// Shannon entropy in nats; zero frequencies contribute nothing.
double compute_task_entropy(const std::vector<double>& freqs);

}  // namespace aitg
