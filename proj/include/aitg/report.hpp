#pragma once

#include "aitg/pipeline.hpp"
#include "aitg/workspace.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace aitg {

// Numeric report fields are emitted as {"value": x, "unit": "..."}.
Json quantity(double value, const char* unit);

Json report_to_json(const PipelineReport& r, const Json& sensitivity = nullptr);
std::string report_table(const PipelineReport& r);

Json mc_to_json(const McReport& m, const std::string& firm_id);
std::string mc_table(const McReport& m, const std::string& firm_id);
Json sobol_to_json(const SobolResult& s, const std::string& firm_id, std::size_t draws, std::uint64_t seed);
Json rank_stability_to_json(const RankStabilityResult& r, double half_width, std::size_t draws, std::uint64_t seed);
Json survey_result_to_json(const SurveyResult& s);

// Re-evaluates the inputs recorded in a report's provenance block.
PipelineReport replay(const Json& report);

// Append-only store keyed by the SHA-256 of the canonical report text. With a
// directory, each report is written once to <dir>/<id>.json and never replaced.
class ReportArchive {
 public:
  explicit ReportArchive(std::filesystem::path dir = {});

  std::string put(const Json& report);
  std::optional<Json> get(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, Json> items_;
  std::vector<std::string> order_;
};

}  // namespace aitg
