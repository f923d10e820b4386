#include "aitg/report.hpp"
#include "aitg/workspace.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace aitg;
namespace fs = std::filesystem;

namespace {

const WorkspaceBundle& bundle() {
  static const WorkspaceBundle b = load_workspace(AITG_DATA_DIR);
  return b;
}

std::map<std::string, std::string> texts() { return bundle().sources; }

void replace_once(std::string& s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  ASSERT_NE(pos, std::string::npos) << from;
  s.replace(pos, from.size(), to);
}

Error load_error(const std::map<std::string, std::string>& files) {
  try {
    load_workspace_texts(files);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected the workspace to be rejected";
  return Error("none", "none");
}

fs::path temp_dir(const char* tag) {
  const fs::path p = fs::temp_directory_path() / (std::string("aitg-test-") + tag + "-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Load, BundledWorkspaceHasNoWarnings) {
  const auto& b = bundle();
  EXPECT_TRUE(b.warnings.empty()) << b.warnings.front();
  EXPECT_EQ(b.industries.size(), 22u);
  EXPECT_EQ(b.pools.size(), 7u);
  EXPECT_GE(b.firms.size(), 14u);
  EXPECT_TRUE(b.runs.count("default"));
  EXPECT_TRUE(b.backtest.has_value());
  EXPECT_EQ(b.backtest->firms.size(), 10u);
  EXPECT_EQ(b.surveys.size(), 3u);
}

TEST(Load, UnknownIndustryNamesTheId) {
  auto f = texts();
  replace_once(f["firms.json"], "\"industry\": \"commercial-banking\"", "\"industry\": \"space-mining\"");
  const Error e = load_error(f);
  EXPECT_EQ(e.stage(), "input");
  EXPECT_NE(std::string(e.what()).find("space-mining"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("firms.json:"), std::string::npos);
  EXPECT_EQ(e.path(), "firms[0].industry");
}

TEST(Load, TruncatedFileReportsLineAndColumn) {
  auto f = texts();
  f["pools.json"] = f["pools.json"].substr(0, f["pools.json"].size() / 2);
  const Error e = load_error(f);
  EXPECT_EQ(e.stage(), "input");
  EXPECT_EQ(e.path().rfind("pools.json:", 0), 0u) << e.path();
  EXPECT_NE(std::string(e.what()).find("parse error"), std::string::npos);
}

TEST(Load, SchemaVersionMismatch) {
  auto f = texts();
  replace_once(f["runs.json"], "\"schema_version\": 1", "\"schema_version\": 2");
  const Error e = load_error(f);
  EXPECT_NE(std::string(e.what()).find("schema"), std::string::npos);
}

TEST(Load, UnknownFieldIsRejected) {
  auto f = texts();
  replace_once(f["registry.json"], "\"theta\"", "\"thetta\"");
  const Error e = load_error(f);
  EXPECT_NE(e.path().find("industries[0]"), std::string::npos) << e.path();
}

TEST(Load, OutOfRangeValueCarriesFieldPath) {
  auto f = texts();
  replace_once(f["registry.json"], "\"theta\": 0.22", "\"theta\": 2.5");
  const Error e = load_error(f);
  EXPECT_NE(e.path().find(".theta"), std::string::npos) << e.path();
  EXPECT_NE(std::string(e.what()).find("registry.json:"), std::string::npos);
}

TEST(Load, MissingDefaultRun) {
  auto f = texts();
  replace_once(f["runs.json"], "\"default\": {", "\"baseline\": {");
  replace_once(f["runs.json"], "\"base\": \"default\"", "\"base\": \"baseline\"");
  EXPECT_THROW(load_workspace_texts(f), Error);
}

TEST(Load, RunInheritance) {
  const auto& b = bundle();
  const auto& d = b.run("default");
  const auto& v = b.run("variable-t50");
  EXPECT_EQ(v.t50_mode, T50Mode::Variable);
  EXPECT_EQ(d.t50_mode, T50Mode::Constant);
  EXPECT_EQ(v.c_t, d.c_t);
  EXPECT_EQ(v.mc.draws, d.mc.draws);
  EXPECT_EQ(v.mc.exit_multiple.p1, d.mc.exit_multiple.p1);
}

TEST(Load, MissingDirectoryAndPathErrors) {
  EXPECT_THROW(load_workspace("/nonexistent/aitg-workspace"), Error);
  EXPECT_THROW(bundle().firm("NOPE"), Error);
  EXPECT_THROW(bundle().run("nope"), Error);
}

TEST(Archive, RoundtripIsLossless) {
  const fs::path dir = temp_dir("archive");
  const fs::path file = dir / "ws.json";
  save_archive(bundle(), file);
  const auto again = load_workspace(file);
  EXPECT_EQ(archive_json(again), archive_json(bundle()));
  EXPECT_TRUE(again.warnings.empty());
  const auto r1 = evaluate_firm(bundle(), "JPM", bundle().run("default"));
  const auto r2 = evaluate_firm(again, "JPM", again.run("default"));
  EXPECT_EQ(r1.input_digest, r2.input_digest);
  EXPECT_EQ(report_to_json(r1), report_to_json(r2));
  fs::remove_all(dir);
}

TEST(Archive, WrongKindRejected) {
  const fs::path dir = temp_dir("kind");
  std::ofstream(dir / "x.json") << R"({"schema_version": 1, "kind": "other", "files": {}})";
  EXPECT_THROW(load_workspace(dir / "x.json"), Error);
  fs::remove_all(dir);
}

TEST(Serialization, RecordsRoundtrip) {
  const auto& b = bundle();
  for (const auto& ind : b.industries)
    EXPECT_EQ(industry_to_json(industry_from_json(industry_to_json(ind), "x")), industry_to_json(ind));
  for (const auto& f : b.firms) EXPECT_EQ(firm_to_json(firm_from_json(firm_to_json(f), "x")), firm_to_json(f));
  for (const auto& [id, r] : b.runs) EXPECT_EQ(run_to_json(run_from_json(run_to_json(r), "x")), run_to_json(r));
}

TEST(Evaluate, ReportCarriesProvenanceAndUnits) {
  const auto r = evaluate_firm(bundle(), "JPM", bundle().run("default"));
  const Json j = report_to_json(r);
  EXPECT_EQ(j["provenance"]["input_digest"], r.input_digest);
  EXPECT_EQ(r.input_digest.size(), 64u);
  EXPECT_EQ(j["scorecard"]["aitg"]["unit"], "score (0-10)");
  EXPECT_TRUE(j["vcb"]["delta_ev"].contains("unit"));
  EXPECT_NEAR(j["scorecard"]["aitg"]["value"].get<double>(), 8.2167, 1e-4);
}

TEST(Evaluate, ReplayReproducesReport) {
  EvalOptions o;
  o.t_hat = 23.8;
  const auto r = evaluate_firm(bundle(), "ZION", bundle().run("default"), o);
  const Json j = report_to_json(r);
  const auto again = replay(j);
  EXPECT_EQ(report_to_json(again), j);
}

TEST(Evaluate, DigestChangesWithInputs) {
  const auto a = evaluate_firm(bundle(), "JPM", bundle().run("default"));
  const auto b = evaluate_firm(bundle(), "JPM", bundle().run("variable-t50"));
  EXPECT_NE(a.input_digest, b.input_digest);
  const auto c = evaluate_firm(bundle(), "JPM", bundle().run("default"));
  EXPECT_EQ(a.input_digest, c.input_digest);
}

TEST(Evaluate, StageLabelsOnFailure) {
  FirmProfile f = bundle().firm("JPM");
  f.financials.revenue = -1.0;
  try {
    evaluate_profile(bundle(), f, bundle().run("default"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_FALSE(e.stage().empty());
  }
}

TEST(ReportStore, AppendOnlyByDigest) {
  const fs::path dir = temp_dir("reports");
  ReportArchive a(dir);
  const Json j = report_to_json(evaluate_firm(bundle(), "JPM", bundle().run("default")));
  const std::string id = a.put(j);
  EXPECT_EQ(a.put(j), id);
  EXPECT_EQ(a.ids().size(), 1u);
  EXPECT_TRUE(fs::exists(dir / (id + ".json")));
  EXPECT_EQ(*a.get(id), j);
  EXPECT_FALSE(a.get("0000").has_value());
  fs::remove_all(dir);
}
