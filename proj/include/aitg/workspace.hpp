#pragma once

#include "aitg/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aitg {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArchiveKind = "aitg-workspace";

struct FrontierSettings {
  VecXd capability_weights = default_capability_weights<double>();
  double ewma_lambda = 0.5;
  std::vector<std::pair<std::string, double>> composites;  // label, C_t
  ScenarioSet<double> scenarios;
};

struct BacktestFixture {
  std::vector<std::string> firms;
  VecXd aitg;
  VecXd delta_margin_pp;
};

struct SurveySubmission {
  std::string id;
  std::string firm;  // optional profile the answers apply to
  SurveyResponse response;
};

struct WorkspaceBundle {
  int schema_version = kSchemaVersion;
  std::vector<IndustryCalibration> industries;
  std::vector<ValuePoolSpec> pools;
  std::vector<FirmProfile> firms;
  std::map<std::string, RunConfig> runs;
  FrontierSettings frontier;
  std::optional<BacktestFixture> backtest;
  std::vector<SurveySubmission> surveys;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> sources;  // file name -> text as loaded

  const IndustryCalibration& industry(const std::string& id) const;
  const FirmProfile& firm(const std::string& id) const;
  const RunConfig& run(const std::string& id) const;
  const SurveySubmission& survey(const std::string& id) const;
  bool has_industry(const std::string& id) const;
  bool has_firm(const std::string& id) const;
};

// Directory with registry.json, pools.json, firms.json, runs.json and the
// optional backtest.json / surveys.json, or a single-file archive.
WorkspaceBundle load_workspace(const std::filesystem::path& path);
// Same, from in-memory file texts keyed by file name.
WorkspaceBundle load_workspace_texts(const std::map<std::string, std::string>& files);

Json archive_json(const WorkspaceBundle& b);
void save_archive(const WorkspaceBundle& b, const std::filesystem::path& file);

// Runs the full pipeline for a firm in the bundle, recording inputs and digest.
PipelineReport evaluate_firm(const WorkspaceBundle& b, const std::string& firm_id,
                             const RunConfig& run, const EvalOptions& opt = {});
// Same for a profile that need not be stored in the bundle.
PipelineReport evaluate_profile(const WorkspaceBundle& b, const FirmProfile& firm, const RunConfig& run,
                                const EvalOptions& opt = {});

// Record (de)serialization. Parsers throw Error("input", ..., path) on bad fields.
Json industry_to_json(const IndustryCalibration& x);
IndustryCalibration industry_from_json(const Json& j, const std::string& path);
Json pool_to_json(const ValuePoolSpec& x);
ValuePoolSpec pool_from_json(const Json& j, const std::string& path);
Json firm_to_json(const FirmProfile& x);
FirmProfile firm_from_json(const Json& j, const std::string& path);
Json run_to_json(const RunConfig& x);
RunConfig run_from_json(const Json& j, const std::string& path, const RunConfig& defaults = {});
Json survey_to_json(const SurveyResponse& x);
SurveyResponse survey_from_json(const Json& j, const std::string& path);
Json options_to_json(const EvalOptions& x);
EvalOptions options_from_json(const Json& j, const std::string& path);

// Parses text, converting parse failures to Error("input", ..., "name:line:col").
Json parse_json_text(const std::string& text, const std::string& name);

}  // namespace aitg
