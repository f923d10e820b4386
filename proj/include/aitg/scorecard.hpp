#pragma once

#include "aitg/types.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace aitg {

enum class Tier { A = 0, B, C, D };

const char* to_string(Tier t);
// Accepts "A".."D"; a split grade such as "A/B" resolves to the weaker tier.
Tier parse_tier(const std::string& s);
double tier_penalty(Tier t);

struct FirmDimensionScores {
  Vec6d scores = Vec6d::Zero();  // FirmDim order
  std::array<Tier, 6> tiers{Tier::A, Tier::A, Tier::A, Tier::A, Tier::A, Tier::A};
};

void validate_dimension_scores(const FirmDimensionScores& s, const std::string& path = "scores");

template <typename Scalar>
Scalar aitg_raw(const Vec6<Scalar>& scores) {
  return scores.mean();
}

template <typename Scalar>
struct IrGap {
  Scalar ir;
  Scalar g_eff;
};

template <typename Scalar>
IrGap<Scalar> ir_and_gap(Scalar aitg, Scalar iass_star) {
  using std::max;
  if (!(iass_star > Scalar(0))) throw Error("scorecard", "adjusted ceiling must be positive");
  return {aitg / iass_star * Scalar(10), max(Scalar(0), iass_star - aitg)};
}

template <typename Scalar>
struct IfsFactors {
  Scalar occ = Scalar(1);
  Scalar dr = Scalar(1);
  Scalar vtr = Scalar(1);
  Scalar crs = Scalar(1);
  Scalar reg = Scalar(1);
};

template <typename Scalar>
Scalar ifs_residual(Scalar vtr, Scalar crs, Scalar reg) {
  using std::pow;
  for (Scalar d : {vtr, crs, reg})
    if (!(d > Scalar(0) && d <= Scalar(1)))
      throw Error("scorecard", "residual factors must lie in (0, 1]");
  return pow(vtr, Scalar(0.35)) * pow(crs, Scalar(0.35)) * pow(reg, Scalar(0.30));
}

template <typename Scalar>
Scalar ifs_residual(const IfsFactors<Scalar>& f) {
  return ifs_residual(f.vtr, f.crs, f.reg);
}

struct UncertaintyComponents {
  double data_tier = 0.0;
  double model = 0.0;
  double afc = 0.0;
  double interrater = 0.0;
};

// Root-sum-of-squares of the component half-widths.
double aggregate_uq(const UncertaintyComponents& c);
// Mean per-dimension tier penalty.
double data_tier_component(const std::array<Tier, 6>& tiers);
double discriminability(double delta, double uq_a, double uq_b);

inline constexpr int kSurveyQuestions = 25;

struct SurveyAnswer {
  int answer = 0;  // 0-4
  bool evidence = false;
  std::string citation;
};

// Q1-Q24 feed the six dimensions in blocks of four; Q25 carries five
// sub-answers (OCC, DR, VTR, CRS, REG).
struct SurveyResponse {
  std::array<SurveyAnswer, 24> answers{};
  std::array<int, 5> q25{2, 2, 2, 2, 2};
};

struct SurveyResult {
  FirmDimensionScores dims;
  IfsFactors<double> ifs;
  std::array<bool, 6> capped{};         // dimension had at least one capped answer
  std::vector<int> capped_questions;    // 1-based question numbers
};

// Anchor score for a 0-4 answer; unevidenced answers of 3 or more are held at 5.
int survey_anchor(int answer, bool evidence);
SurveyResult score_survey(const SurveyResponse& r);

struct DeltaRange {
  double lo, hi;
};
// Declared entry ranges for OCC, DR, VTR, CRS, REG.
inline constexpr std::array<DeltaRange, 5> kDeltaRanges{
    {{0.50, 1.00}, {0.50, 1.00}, {0.75, 1.00}, {0.70, 1.00}, {0.55, 1.00}}};

// "AITG a | IR b | G_eff c | UQ ±d"
std::string scorecard_line(double aitg, double ir, double g_eff, double uq);

}  // namespace aitg
