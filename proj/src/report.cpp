#include "aitg/report.hpp"

#include "aitg/digest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aitg {

Json quantity(double value, const char* unit) { return Json{{"value", value}, {"unit", unit}}; }

namespace {

constexpr const char* kScore = "score (0-10)";
constexpr const char* kRatio = "ratio";
constexpr const char* kMonths = "months";
constexpr const char* kBn = "USD bn";
constexpr const char* kBnYear = "USD bn per year";
constexpr const char* kFraction = "fraction";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

Json report_to_json(const PipelineReport& r, const Json& sensitivity) {
  Json tiers = Json::object();
  for (std::size_t d = 0; d < 6; ++d) tiers[std::string(kFirmDimNames[d])] = to_string(r.tiers[d]);

  Json pools = Json::array();
  for (const auto& p : r.vcb.pools)
    pools.push_back({{"name", p.name},
                     {"uplift", quantity(p.uplift, "fraction of revenue")},
                     {"kappa", quantity(p.kappa, kFraction)},
                     {"bottleneck", quantity(p.b, kFraction)},
                     {"capture_raw", quantity(p.capture_raw, kFraction)},
                     {"capture", quantity(p.capture, kFraction)},
                     {"value", quantity(p.value, kBnYear)}});
  const auto& v = r.vcb;
  Json inputs = r.inputs.empty() ? Json(nullptr) : Json::parse(r.inputs);
  return Json{
      {"engine_version", r.engine_version},
      {"firm", {{"id", r.firm_id}, {"name", r.firm_name}}},
      {"industry", r.industry_id},
      {"run", r.run_id},
      {"scorecard_line", r.scorecard_line},
      {"ceiling",
       {{"psi", quantity(r.psi, kRatio)},
        {"theta", quantity(r.theta, "per capability index unit")},
        {"c_t", quantity(r.c_t, "capability index")},
        {"iass_base", quantity(r.iass_base, kScore)},
        {"afc", quantity(r.afc, "multiplier")},
        {"iass_star", quantity(r.iass_star, kScore)}}},
      {"scorecard",
       {{"aitg", quantity(r.aitg, kScore)},
        {"ir", quantity(r.ir, kScore)},
        {"g_eff", quantity(r.g_eff, kScore)},
        {"uq", quantity(r.uq, kScore)},
        {"uq_components",
         {{"data_tier", quantity(r.uq_components.data_tier, kScore)},
          {"model", quantity(r.uq_components.model, kScore)},
          {"afc", quantity(r.uq_components.afc, kScore)},
          {"interrater", quantity(r.uq_components.interrater, kScore)}}},
        {"tiers", tiers},
        {"frontier_exceeded", r.frontier_exceeded}}},
      {"trajectory",
       {{"t_hat", quantity(r.t_hat, kMonths)},
        {"t_hat_source", r.t_hat_source},
        {"t50_base", quantity(r.t50_base, kMonths)},
        {"t50", quantity(r.t50, kMonths)},
        {"k_multiplier", quantity(r.k_multiplier, "multiplier")},
        {"delay", quantity(r.delay, "multiplier")},
        {"wave_zone", quantity(r.wave_zone, "wave index (1-3)")}}},
      {"vcb",
       {{"phi", quantity(v.phi, kFraction)},
        {"eta", quantity(v.eta, kFraction)},
        {"pools", pools},
        {"capture_sum_raw", quantity(v.capture_sum_raw, kFraction)},
        {"rescaled", v.rescaled},
        {"pool_sum", quantity(v.pool_sum, kBnYear)},
        {"r0", quantity(v.r0, kFraction)},
        {"r_end", quantity(v.r_end, kFraction)},
        {"delta_r", quantity(v.delta_r, kFraction)},
        {"ifs_resid", quantity(v.ifs_resid, "multiplier")},
        {"exit_multiple", quantity(v.exit_multiple, "x earnings")},
        {"tv", quantity(v.tv, kBn)},
        {"fcf", quantity(v.fcf, kBn)},
        {"npv_cost", quantity(v.npv_cost, kBn)},
        {"delta_ev", quantity(v.delta_ev, kBn)},
        {"impl_cost", quantity(v.impl_cost, kBn)},
        {"cost_basis", v.cost_basis},
        {"value_density", {{"multiple", quantity(v.vd.multiple, "x cost")}, {"tier", to_string(v.vd.tier)}}}}},
      {"adri",
       {{"moat", quantity(r.moat, kFraction)},
        {"urgency", quantity(r.urgency, "multiplier")},
        {"adri", quantity(r.adri, kScore)},
        {"hazard", quantity(r.hazard, "per year")},
        {"p_displacement", quantity(r.p_displacement, "probability")},
        {"class", to_string(r.adri_class)}}},
      {"sensitivity", sensitivity},
      {"notes", r.notes},
      {"provenance", {{"engine_version", r.engine_version}, {"input_digest", r.input_digest}, {"inputs", inputs}}}};
}

std::string report_table(const PipelineReport& r) {
  std::ostringstream o;
  const auto& v = r.vcb;
  o << r.firm_name << " (" << r.firm_id << "), industry " << r.industry_id << ", run " << r.run_id << "\n";
  o << r.scorecard_line << "\n\n";
  o << "Ceiling      IASS " << fmt("%.2f", r.iass_base) << " x AFC " << fmt("%.3f", r.afc) << " = IASS* "
    << fmt("%.2f", r.iass_star) << "  (psi " << fmt("%.3f", r.psi) << ", theta " << fmt("%.2f", r.theta)
    << ", C_t " << fmt("%.2f", r.c_t) << ")\n";
  o << "Trajectory   t_hat " << fmt("%.1f", r.t_hat) << " mo [" << r.t_hat_source << "], t50 "
    << fmt("%.1f", r.t50) << " mo (base " << fmt("%.1f", r.t50_base) << "), wave zone " << r.wave_zone << "\n\n";
  o << "Value pools                 uplift   b      capture  V (USD m/yr)\n";
  for (const auto& p : v.pools) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-24s %6.3f  %6.3f  %6.3f  %10.1f\n", p.name.c_str(), p.uplift, p.b, p.capture,
                  1000.0 * p.value);
    o << buf;
  }
  o << "  Phi " << fmt("%.3f", v.phi) << ", eta " << fmt("%.3f", v.eta) << ", raw capture sum "
    << fmt("%.3f", v.capture_sum_raw) << (v.rescaled ? " (rescaled)" : "") << "\n";
  o << "Bridge       sum V " << fmt("%.1f", 1000.0 * v.pool_sum) << "m/yr  dR " << fmt("%.3f", v.delta_r)
    << "  IFS " << fmt("%.3f", v.ifs_resid) << "  M " << fmt("%.1f", v.exit_multiple) << "x\n";
  o << "             TV " << fmt("%.1f", 1000.0 * v.tv) << "m + FCF " << fmt("%.1f", 1000.0 * v.fcf) << "m - cost "
    << fmt("%.1f", 1000.0 * v.npv_cost) << "m = dEV " << fmt("%.1f", 1000.0 * v.delta_ev) << "m\n";
  o << "             VD " << fmt("%.2f", v.vd.multiple) << "x (" << to_string(v.vd.tier) << "), cost basis: "
    << v.cost_basis << "\n";
  o << "Risk         ADRI " << fmt("%.2f", r.adri) << " (" << to_string(r.adri_class) << "), moat "
    << fmt("%.2f", r.moat) << ", urgency " << fmt("%.2f", r.urgency) << ", P(displaced, 24 mo) "
    << fmt("%.4f", r.p_displacement) << "\n";
  for (const auto& n : r.notes) o << "note: " << n << "\n";
  o << "digest " << r.input_digest << ", engine " << r.engine_version << "\n";
  return o.str();
}

Json mc_to_json(const McReport& m, const std::string& firm_id) {
  Json pct = Json::array();
  for (std::size_t i = 0; i < m.summary.percentile_levels.size(); ++i)
    pct.push_back({{"level", m.summary.percentile_levels[i]}, {"delta_ev", quantity(m.summary.percentile_values[i], kBn)}});
  const double p10 = m.summary.at(10.0), p90 = m.summary.at(90.0);
  return Json{{"firm", firm_id},
              {"draws", m.summary.draws},
              {"seed", m.summary.seed},
              {"percentiles", pct},
              {"mean", quantity(m.summary.mean, kBn)},
              {"p90_over_p10", p10 > 0.0 ? quantity(p90 / p10, kRatio) : Json(nullptr)},
              {"base_delta_ev", quantity(m.base_delta_ev, kBn)},
              {"impl_cost", quantity(m.impl_cost, kBn)},
              {"vd_p50", quantity(m.vd_p50, "x cost")},
              {"signal", to_string(m.signal)},
              {"digest", m.summary.digest}};
}

std::string mc_table(const McReport& m, const std::string& firm_id) {
  std::ostringstream o;
  o << "Monte Carlo dEV, " << firm_id << ": " << m.summary.draws << " draws, seed " << m.summary.seed << "\n";
  for (std::size_t i = 0; i < m.summary.percentile_levels.size(); ++i)
    o << "  P" << fmt("%.0f", m.summary.percentile_levels[i]) << "  " << fmt("%10.3f", m.summary.percentile_values[i])
      << " USD bn\n";
  o << "  mean " << fmt("%10.3f", m.summary.mean) << " USD bn (base case " << fmt("%.3f", m.base_delta_ev) << ")\n";
  if (m.summary.at(10.0) > 0.0) o << "  P90/P10 " << fmt("%.2f", m.summary.at(90.0) / m.summary.at(10.0)) << "\n";
  o << "  VD at P50 " << fmt("%.2f", m.vd_p50) << "x, signal " << to_string(m.signal) << "\n";
  o << "  digest " << m.summary.digest << "\n";
  return o.str();
}

Json sobol_to_json(const SobolResult& s, const std::string& firm_id, std::size_t draws, std::uint64_t seed) {
  Json idx = Json::array();
  for (std::size_t i = 0; i < s.names.size(); ++i)
    idx.push_back({{"input", s.names[i]}, {"s1", quantity(s.first_order[i], "share of variance")}});
  return Json{{"firm", firm_id}, {"draws", draws}, {"seed", seed}, {"variance", quantity(s.variance, "USD bn^2")},
              {"first_order", idx}};
}

Json rank_stability_to_json(const RankStabilityResult& r, double half_width, std::size_t draws, std::uint64_t seed) {
  Json items = Json::array();
  for (std::size_t i = 0; i < r.ids.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    items.push_back({{"id", r.ids[i]},
                     {"base_rank", quantity(r.base_rank(k), "rank")},
                     {"mean_rank", quantity(r.mean_rank(k), "rank")}});
  }
  Json swaps = Json::array();
  for (Eigen::Index i = 0; i < r.swap_frequency.rows(); ++i)
    for (Eigen::Index j = i + 1; j < r.swap_frequency.cols(); ++j)
      if (r.swap_frequency(i, j) > 0.0)
        swaps.push_back({{"a", r.ids[static_cast<std::size_t>(i)]},
                         {"b", r.ids[static_cast<std::size_t>(j)]},
                         {"frequency", quantity(r.swap_frequency(i, j), "share of draws")}});
  return Json{{"half_width", quantity(half_width, "weight units")},
              {"draws", draws},
              {"seed", seed},
              {"items", items},
              {"mean_abs_shift", quantity(r.mean_abs_shift, "rank positions")},
              {"total_swap_events", r.total_swap_events},
              {"swaps", swaps}};
}

Json survey_result_to_json(const SurveyResult& s) {
  Json scores = Json::object(), tiers = Json::object(), capped = Json::object();
  for (std::size_t d = 0; d < 6; ++d) {
    const std::string n(kFirmDimNames[d]);
    scores[n] = s.dims.scores(static_cast<Eigen::Index>(d));
    tiers[n] = to_string(s.dims.tiers[d]);
    capped[n] = s.capped[d];
  }
  return Json{{"scores", scores},
              {"tiers", tiers},
              {"capped", capped},
              {"capped_questions", s.capped_questions},
              {"aitg", quantity(aitg_raw(s.dims.scores), kScore)},
              {"ifs", {{"occ", s.ifs.occ}, {"dr", s.ifs.dr}, {"vtr", s.ifs.vtr}, {"crs", s.ifs.crs}, {"reg", s.ifs.reg}}}};
}

PipelineReport replay(const Json& report) {
  if (!report.is_object() || !report.contains("provenance") || !report["provenance"].contains("inputs") ||
      report["provenance"]["inputs"].is_null())
    throw Error("input", "report carries no recorded inputs", "provenance.inputs");
  const Json& in = report["provenance"]["inputs"];
  const std::string p = "provenance.inputs";
  if (!in.is_object() || !in.contains("industry") || !in.contains("pools") || !in.contains("firm") ||
      !in.contains("run") || !in.contains("options"))
    throw Error("input", "incomplete recorded inputs", p);
  const auto industry = industry_from_json(in["industry"], p + ".industry");
  std::vector<ValuePoolSpec> pools;
  if (!in["pools"].is_array()) throw Error("input", "expected an array", p + ".pools");
  for (std::size_t i = 0; i < in["pools"].size(); ++i)
    pools.push_back(pool_from_json(in["pools"][i], p + ".pools[" + std::to_string(i) + "]"));
  const auto firm = firm_from_json(in["firm"], p + ".firm");
  const auto run = run_from_json(in["run"], p + ".run");
  const auto opt = options_from_json(in["options"], p + ".options");
  PipelineReport r = evaluate(industry, pools, firm, run, opt);
  r.inputs = in.dump();
  r.input_digest = sha256_hex(r.inputs);
  return r;
}

ReportArchive::ReportArchive(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (dir_.empty()) return;
  std::filesystem::create_directories(dir_);
  std::vector<std::pair<std::filesystem::file_time_type, std::string>> found;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    if (e.path().extension() != ".json") continue;
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string id = e.path().stem().string();
    items_[id] = Json::parse(ss.str());
    found.emplace_back(e.last_write_time(), id);
  }
  std::sort(found.begin(), found.end());
  for (const auto& [t, id] : found) order_.push_back(id);
}

std::string ReportArchive::put(const Json& report) {
  const std::string text = report.dump();
  const std::string id = sha256_hex(text);
  std::lock_guard lock(mu_);
  if (items_.count(id)) return id;
  if (!dir_.empty()) {
    const auto file = dir_ / (id + ".json");
    if (!std::filesystem::exists(file)) {
      const auto tmp = dir_ / (id + ".json.tmp");
      {
        std::ofstream out(tmp, std::ios::binary);
        out << text;
        if (!out) throw Error("report", "cannot write archive entry", tmp.string());
      }
      std::filesystem::rename(tmp, file);
    }
  }
  items_[id] = report;
  order_.push_back(id);
  return id;
}

std::optional<Json> ReportArchive::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = items_.find(id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ReportArchive::ids() const {
  std::lock_guard lock(mu_);
  return order_;
}

}  // namespace aitg
