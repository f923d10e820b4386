#include "aitg/scorecard.hpp"

#include <algorithm>
#include <cstdio>

namespace aitg {

const char* to_string(Tier t) {
  switch (t) {
    case Tier::A: return "A";
    case Tier::B: return "B";
    case Tier::C: return "C";
    case Tier::D: return "D";
  }
  return "?";
}

Tier parse_tier(const std::string& s) {
  if (s.empty()) throw Error("scorecard", "empty evidence tier");
  Tier worst = Tier::A;
  bool any = false;
  for (char c : s) {
    if (c == '/' || c == ' ') continue;
    if (c < 'A' || c > 'D') throw Error("scorecard", "unknown evidence tier '" + s + "'");
    worst = std::max(worst, static_cast<Tier>(c - 'A'));
    any = true;
  }
  if (!any) throw Error("scorecard", "unknown evidence tier '" + s + "'");
  return worst;
}

double tier_penalty(Tier t) {
  static constexpr std::array<double, 4> p{0.00, 0.08, 0.18, 0.30};
  return p[static_cast<int>(t)];
}

void validate_dimension_scores(const FirmDimensionScores& s, const std::string& path) {
  for (int d = 0; d < 6; ++d)
    if (!(s.scores(d) >= 0.0 && s.scores(d) <= 10.0))
      throw Error("scorecard", "dimension score outside [0, 10]",
                  path + "." + std::string(kFirmDimNames[d]));
}

double aggregate_uq(const UncertaintyComponents& c) {
  for (double v : {c.data_tier, c.model, c.afc, c.interrater})
    if (v < 0.0) throw Error("scorecard", "uncertainty components must be nonnegative");
  return std::sqrt(c.data_tier * c.data_tier + c.model * c.model + c.afc * c.afc +
                   c.interrater * c.interrater);
}

double data_tier_component(const std::array<Tier, 6>& tiers) {
  double s = 0.0;
  for (Tier t : tiers) s += tier_penalty(t);
  return s / 6.0;
}

double discriminability(double delta, double uq_a, double uq_b) {
  if (uq_a < 0.0 || uq_b < 0.0) throw Error("scorecard", "UQ must be nonnegative");
  const double joint = std::hypot(uq_a, uq_b);
  if (joint == 0.0) throw Error("scorecard", "both uncertainty bands are zero");
  return delta / joint;
}

int survey_anchor(int answer, bool evidence) {
  if (answer < 0 || answer > 4) throw Error("scorecard", "survey answer outside 0-4");
  const int capped = (answer >= 3 && !evidence) ? 2 : answer;
  return 2 * capped + 1;
}

SurveyResult score_survey(const SurveyResponse& r) {
  SurveyResult out;
  for (int q = 0; q < 24; ++q) {
    const auto& a = r.answers[q];
    if (a.answer < 0 || a.answer > 4)
      throw Error("scorecard", "survey answer outside 0-4", "answers[" + std::to_string(q) + "]");
    const int dim = q / 4;
    const int score = survey_anchor(a.answer, a.evidence);
    if (score != 2 * a.answer + 1) {
      out.capped[dim] = true;
      out.capped_questions.push_back(q + 1);
    }
    out.dims.scores(dim) += score / 4.0;
  }
  // Survey grades: capped dimensions drop to D; fully evidenced ones earn B.
  for (int d = 0; d < 6; ++d) {
    bool evidenced = true;
    for (int q = 4 * d; q < 4 * d + 4; ++q) evidenced = evidenced && r.answers[q].evidence;
    out.dims.tiers[d] = out.capped[d] ? Tier::D : (evidenced ? Tier::B : Tier::C);
  }

  std::array<double, 5> delta{};
  for (int i = 0; i < 5; ++i) {
    const int a = r.q25[i];
    if (a < 0 || a > 4)
      throw Error("scorecard", "Q25 sub-answer outside 0-4", "q25[" + std::to_string(i) + "]");
    delta[i] = std::clamp((2 * a + 1) / 10.0, kDeltaRanges[i].lo, kDeltaRanges[i].hi);
  }
  out.ifs = {delta[0], delta[1], delta[2], delta[3], delta[4]};
  return out;
}

std::string scorecard_line(double aitg, double ir, double g_eff, double uq) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "AITG %.2f | IR %.2f | G_eff %.2f | UQ ±%.2f", aitg, ir, g_eff, uq);
  return buf;
}

}  // namespace aitg
