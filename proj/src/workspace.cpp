#include "aitg/workspace.hpp"

#include "aitg/digest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace aitg {

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& path) {
  throw Error("input", what, path);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) bad("expected an object", path);
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  require_object(j, path);
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      bad("unknown field '" + k + "'", join(path, k));
  }
}

double as_num(const Json& v, const std::string& path) {
  if (!v.is_number()) bad("expected a number", path);
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad("number is not finite", path);
  return d;
}

double num(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'", join(path, key));
  return as_num(j.at(key), join(path, key));
}

std::optional<double> opt_num(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return as_num(j.at(key), join(path, key));
}

double num_or(const Json& j, const char* key, const std::string& path, double dflt) {
  return opt_num(j, key, path).value_or(dflt);
}

int int_or(const Json& j, const char* key, const std::string& path, int dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) bad("expected an integer", join(path, key));
  return v.get<int>();
}

std::uint64_t u64_or(const Json& j, const char* key, const std::string& path, std::uint64_t dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad("expected a nonnegative integer", join(path, key));
  return v.get<std::uint64_t>();
}

bool bool_or(const Json& j, const char* key, const std::string& path, bool dflt) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) bad("expected true or false", join(path, key));
  return j.at(key).get<bool>();
}

std::string str(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'", join(path, key));
  if (!j.at(key).is_string()) bad("expected a string", join(path, key));
  return j.at(key).get<std::string>();
}

std::string str_or(const Json& j, const char* key, const std::string& path, const std::string& dflt) {
  return j.contains(key) ? str(j, key, path) : dflt;
}

std::vector<std::string> str_list(const Json& j, const char* key, const std::string& path) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& a = j.at(key);
  const std::string p = join(path, key);
  if (!a.is_array()) bad("expected an array of strings", p);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) bad("expected a string", at_index(p, i));
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

std::vector<double> num_list(const Json& a, const std::string& path, std::size_t expect = 0) {
  if (!a.is_array()) bad("expected an array of numbers", path);
  if (expect && a.size() != expect) bad("expected " + std::to_string(expect) + " entries", path);
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_num(a[i], at_index(path, i)));
  return out;
}

template <std::size_t N, typename E>
Vec6d named_six(const Json& j, const std::array<std::string_view, N>& names, const std::string& path) {
  static_assert(N == 6);
  require_object(j, path);
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find(names.begin(), names.end(), k) == names.end())
      bad("unknown dimension '" + k + "'", join(path, k));
  }
  Vec6d out;
  for (std::size_t d = 0; d < N; ++d) out(static_cast<Eigen::Index>(d)) = num(j, std::string(names[d]).c_str(), path);
  return out;
}

template <std::size_t N>
Json six_to_json(const Vec6d& v, const std::array<std::string_view, N>& names) {
  Json j = Json::object();
  for (std::size_t d = 0; d < N; ++d) j[std::string(names[d])] = v(static_cast<Eigen::Index>(d));
  return j;
}

DistributionSpec dist_from_json(const Json& j, const std::string& path, const DistributionSpec& dflt) {
  check_keys(j, {"kind", "p1", "p2", "floor"}, path);
  DistributionSpec d = dflt;
  if (j.contains("kind")) {
    try {
      d.kind = parse_dist_kind(str(j, "kind", path));
    } catch (const Error& e) {
      bad(e.detail(), join(path, "kind"));
    }
  }
  d.p1 = num_or(j, "p1", path, d.p1);
  d.p2 = num_or(j, "p2", path, d.p2);
  if (j.contains("floor")) d.floor = j.at("floor").is_null() ? -INFINITY : num(j, "floor", path);
  d.validate(path);
  return d;
}

Json dist_to_json(const DistributionSpec& d) {
  Json j{{"kind", to_string(d.kind)}, {"p1", d.p1}, {"p2", d.p2}};
  j["floor"] = std::isfinite(d.floor) ? Json(d.floor) : Json(nullptr);
  return j;
}

// 1-based line of byte offset `pos`.
std::size_t line_at(const std::string& text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

// Best-effort source line for a record error: the record's id, then the last
// key of the field path after it.
std::string locate(const std::string& file, const std::string& text, const std::string& record_id,
                   const std::string& field_path) {
  std::size_t pos = std::string::npos;
  if (!record_id.empty()) {
    const std::regex id_re("\"(id|name)\"\\s*:\\s*\"" +
                           std::regex_replace(record_id, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)") + "\"");
    std::smatch m;
    if (std::regex_search(text, m, id_re)) pos = static_cast<std::size_t>(m.position(0));
  }
  if (pos != std::string::npos) {
    std::string last = field_path.substr(field_path.find_last_of('.') + 1);
    last = last.substr(0, last.find('['));
    if (!last.empty()) {
      const auto p = text.find("\"" + last + "\"", pos);
      if (p != std::string::npos && line_at(text, p) - line_at(text, pos) < 80) pos = p;
    }
    return file + ":" + std::to_string(line_at(text, pos));
  }
  return file;
}

template <typename Fn>
auto with_location(const std::string& file, const std::string& text, const std::string& record_id, Fn&& fn)
    -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.stage(), e.detail() + " [" + locate(file, text, record_id, e.path()) + "]", e.path());
  }
}

std::string record_id(const Json& j) {
  if (j.is_object()) {
    if (j.contains("id") && j["id"].is_string()) return j["id"].get<std::string>();
    if (j.contains("name") && j["name"].is_string()) return j["name"].get<std::string>();
  }
  return {};
}

void check_schema(const Json& j, const std::string& file) {
  if (!j.is_object()) bad("top level must be an object", file);
  if (!j.contains("schema_version")) bad("missing schema_version", file + ": schema_version");
  const auto& v = j.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    bad("schema version mismatch: expected " + std::to_string(kSchemaVersion) + ", found " + v.dump(),
        file + ": schema_version");
}

const Json& array_field(const Json& j, const char* key, const std::string& file) {
  if (!j.contains(key) || !j.at(key).is_array()) bad(std::string("expected array '") + key + "'", file + ": " + key);
  return j.at(key);
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& name) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    const std::size_t line = line_at(text, byte);
    const std::size_t bol = byte == 0 ? 0 : text.rfind('\n', byte - 1);
    const std::size_t col = bol == std::string::npos ? byte + 1 : byte - bol;
    std::string msg = e.what();
    if (const auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw Error("input", "parse error: " + msg, name + ":" + std::to_string(line) + ":" + std::to_string(col));
  }
}

// ---- records -------------------------------------------------------------

Json industry_to_json(const IndustryCalibration& x) {
  Json j{{"id", x.id},       {"naics", x.naics},
         {"name", x.name},   {"scores", six_to_json(x.scores, kIndustryDimNames)},
         {"psi", x.psi},     {"theta", x.theta},
         {"s_star", x.s_star}, {"exit_multiple", x.exit_multiple}};
  Json pub = Json::object();
  if (x.iass_published) pub["iass"] = *x.iass_published;
  if (x.iass_star_published) pub["iass_star"] = *x.iass_star_published;
  if (!pub.empty()) j["published"] = pub;
  if (!x.assumed_fields.empty()) j["assumed_fields"] = x.assumed_fields;
  return j;
}

IndustryCalibration industry_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"id", "naics", "name", "scores", "psi", "theta", "s_star", "exit_multiple", "published",
                 "assumed_fields"},
             path);
  IndustryCalibration x;
  x.id = str(j, "id", path);
  x.naics = str_or(j, "naics", path, "");
  x.name = str_or(j, "name", path, x.id);
  if (!j.contains("scores")) bad("missing field 'scores'", join(path, "scores"));
  x.scores = named_six<6, IndustryDim>(j.at("scores"), kIndustryDimNames, join(path, "scores"));
  x.theta = num(j, "theta", path);
  x.s_star = num(j, "s_star", path);
  x.exit_multiple = num(j, "exit_multiple", path);
  if (j.contains("published")) {
    const std::string pp = join(path, "published");
    check_keys(j.at("published"), {"iass", "iass_star"}, pp);
    x.iass_published = opt_num(j.at("published"), "iass", pp);
    x.iass_star_published = opt_num(j.at("published"), "iass_star", pp);
  }
  x.assumed_fields = str_list(j, "assumed_fields", path);
  // psi defaults to the scalar floor on RFF when not given.
  const double rff = x.rff();
  if (!(rff >= 0.0 && rff <= 10.0)) bad("RFF score outside [0, 10]", join(path, "scores.RFF"));
  x.psi = num_or(j, "psi", path, compute_psi(rff));
  try {
    validate_industry(x, path);
  } catch (const Error& e) {
    bad(e.detail(), e.path());
  }
  return x;
}

Json pool_to_json(const ValuePoolSpec& x) {
  Json dims = Json::array();
  for (auto d : x.dims) dims.push_back(std::string(kFirmDimNames[static_cast<std::size_t>(index_of(d))]));
  Json j{{"name", x.name}, {"kappa", x.kappa}, {"dims", dims}, {"uplift", x.uplift}};
  if (x.uplift_range) j["uplift_range"] = {(*x.uplift_range)[0], (*x.uplift_range)[1]};
  if (x.alpha.size()) j["alpha"] = std::vector<double>(x.alpha.data(), x.alpha.data() + x.alpha.size());
  return j;
}

ValuePoolSpec pool_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"name", "kappa", "dims", "uplift", "uplift_range", "alpha"}, path);
  ValuePoolSpec x;
  x.name = str(j, "name", path);
  x.kappa = num(j, "kappa", path);
  for (const auto& [i, d] : [&] {
         std::vector<std::pair<std::size_t, std::string>> v;
         const auto names = str_list(j, "dims", path);
         for (std::size_t i = 0; i < names.size(); ++i) v.emplace_back(i, names[i]);
         return v;
       }()) {
    try {
      x.dims.push_back(parse_firm_dim(d));
    } catch (const Error&) {
      bad("unknown dimension '" + d + "'", at_index(join(path, "dims"), i));
    }
  }
  if (j.contains("uplift_range")) {
    const auto r = num_list(j.at("uplift_range"), join(path, "uplift_range"), 2);
    x.uplift_range = std::array<double, 2>{r[0], r[1]};
  }
  if (j.contains("uplift")) {
    x.uplift = num(j, "uplift", path);
  } else if (x.uplift_range) {
    x.uplift = 0.5 * ((*x.uplift_range)[0] + (*x.uplift_range)[1]);
  } else {
    bad("missing field 'uplift'", join(path, "uplift"));
  }
  if (j.contains("alpha")) {
    const auto a = num_list(j.at("alpha"), join(path, "alpha"));
    x.alpha = Eigen::Map<const VecXd>(a.data(), static_cast<Eigen::Index>(a.size()));
  }
  try {
    validate_pool(x, path);
  } catch (const Error& e) {
    bad(e.detail(), e.path());
  }
  return x;
}

Json firm_to_json(const FirmProfile& x) {
  Json tiers = Json::object();
  for (std::size_t d = 0; d < 6; ++d) tiers[std::string(kFirmDimNames[d])] = to_string(x.dims.tiers[d]);
  Json fin{{"revenue", x.financials.revenue}, {"wacc", x.financials.wacc}};
  if (x.financials.exit_multiple) fin["exit_multiple"] = *x.financials.exit_multiple;
  if (x.financials.s_star) fin["s_star"] = *x.financials.s_star;
  if (x.financials.vendor_only) fin["vendor_only"] = true;
  if (x.financials.impl_cost) fin["impl_cost"] = *x.financials.impl_cost;
  if (!x.financials.cost_streams.empty()) {
    Json cs = Json::array();
    for (const auto& y : x.financials.cost_streams) cs.push_back({{"capex", y.capex}, {"opex", y.opex}});
    fin["cost_streams"] = cs;
  }
  const auto& m = x.moat;
  Json j{{"id", x.id},
         {"name", x.name},
         {"industry", x.industry},
         {"scores", six_to_json(x.dims.scores, kFirmDimNames)},
         {"tiers", tiers},
         {"ifs", {{"occ", x.ifs.occ}, {"dr", x.ifs.dr}, {"vtr", x.ifs.vtr}, {"crs", x.ifs.crs}, {"reg", x.ifs.reg}}},
         {"financials", fin},
         {"moat",
          {{"factors", std::vector<double>(m.scores.data(), m.scores.data() + 4)},
           {"weights", std::vector<double>(m.weights.data(), m.weights.data() + 4)}}}};
  if (x.uq_model || x.uq_interrater) {
    Json uq = Json::object();
    if (x.uq_model) uq["model"] = *x.uq_model;
    if (x.uq_interrater) uq["interrater"] = *x.uq_interrater;
    j["uq"] = uq;
  }
  if (!x.uplift_overrides.empty()) {
    Json po = Json::object();
    for (const auto& [k, v] : x.uplift_overrides) po[k] = {{"uplift", v}};
    j["pool_overrides"] = po;
  }
  if (!x.published.empty()) j["published"] = x.published;
  if (!x.synthetic_fields.empty()) j["synthetic_fields"] = x.synthetic_fields;
  return j;
}

FirmProfile firm_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"id", "name", "industry", "scores", "tiers", "ifs", "financials", "moat", "uq",
                 "pool_overrides", "published", "synthetic_fields"},
             path);
  FirmProfile x;
  x.id = str(j, "id", path);
  x.name = str_or(j, "name", path, x.id);
  x.industry = str(j, "industry", path);
  if (!j.contains("scores")) bad("missing field 'scores'", join(path, "scores"));
  x.dims.scores = named_six<6, FirmDim>(j.at("scores"), kFirmDimNames, join(path, "scores"));
  if (j.contains("tiers")) {
    const std::string tp = join(path, "tiers");
    require_object(j.at("tiers"), tp);
    for (const auto& [k, v] : j.at("tiers").items()) {
      int d = -1;
      for (std::size_t i = 0; i < 6; ++i)
        if (kFirmDimNames[i] == k) d = static_cast<int>(i);
      if (d < 0) bad("unknown dimension '" + k + "'", join(tp, k));
      if (!v.is_string()) bad("expected a tier grade string", join(tp, k));
      try {
        x.dims.tiers[static_cast<std::size_t>(d)] = parse_tier(v.get<std::string>());
      } catch (const Error& e) {
        bad(e.detail(), join(tp, k));
      }
    }
  }
  if (!j.contains("ifs")) bad("missing field 'ifs'", join(path, "ifs"));
  {
    const std::string ip = join(path, "ifs");
    const auto& f = j.at("ifs");
    check_keys(f, {"occ", "dr", "vtr", "crs", "reg"}, ip);
    x.ifs = {num(f, "occ", ip), num(f, "dr", ip), num(f, "vtr", ip), num(f, "crs", ip), num(f, "reg", ip)};
  }
  if (!j.contains("financials")) bad("missing field 'financials'", join(path, "financials"));
  {
    const std::string fp = join(path, "financials");
    const auto& f = j.at("financials");
    check_keys(f, {"revenue", "wacc", "exit_multiple", "s_star", "vendor_only", "impl_cost", "cost_streams"}, fp);
    auto& fin = x.financials;
    fin.revenue = num(f, "revenue", fp);
    fin.wacc = num_or(f, "wacc", fp, fin.wacc);
    fin.exit_multiple = opt_num(f, "exit_multiple", fp);
    fin.s_star = opt_num(f, "s_star", fp);
    fin.vendor_only = bool_or(f, "vendor_only", fp, false);
    fin.impl_cost = opt_num(f, "impl_cost", fp);
    if (f.contains("cost_streams")) {
      const std::string cp = join(fp, "cost_streams");
      const auto& cs = f.at("cost_streams");
      if (!cs.is_array()) bad("expected an array", cp);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string yp = at_index(cp, i);
        check_keys(cs[i], {"capex", "opex"}, yp);
        const double capex = num_or(cs[i], "capex", yp, 0.0), opex = num_or(cs[i], "opex", yp, 0.0);
        if (capex < 0.0 || opex < 0.0) bad("cost entries must be nonnegative", yp);
        fin.cost_streams.push_back({capex, opex});
      }
    }
  }
  if (j.contains("moat")) {
    const std::string mp = join(path, "moat");
    const auto& m = j.at("moat");
    check_keys(m, {"factors", "weights", "value"}, mp);
    if (m.contains("value") == m.contains("factors")) bad("give exactly one of 'factors' or 'value'", mp);
    if (m.contains("value")) {
      x.moat.scores.setConstant(num(m, "value", mp));
    } else {
      const auto f = num_list(m.at("factors"), join(mp, "factors"), 4);
      x.moat.scores = Eigen::Map<const Eigen::Vector4d>(f.data());
    }
    if (m.contains("weights")) {
      const auto w = num_list(m.at("weights"), join(mp, "weights"), 4);
      x.moat.weights = Eigen::Map<const Eigen::Vector4d>(w.data());
      if ((x.moat.weights.array() < 0.0).any() || std::abs(x.moat.weights.sum() - 1.0) > 1e-9)
        bad("moat weights must be nonnegative and sum to 1", join(mp, "weights"));
    }
  } else {
    x.moat.scores.setConstant(0.5);
  }
  if (j.contains("uq")) {
    const std::string up = join(path, "uq");
    check_keys(j.at("uq"), {"model", "interrater"}, up);
    x.uq_model = opt_num(j.at("uq"), "model", up);
    x.uq_interrater = opt_num(j.at("uq"), "interrater", up);
    if ((x.uq_model && *x.uq_model < 0.0) || (x.uq_interrater && *x.uq_interrater < 0.0))
      bad("uncertainty components must be nonnegative", up);
  }
  if (j.contains("pool_overrides")) {
    const std::string pp = join(path, "pool_overrides");
    require_object(j.at("pool_overrides"), pp);
    for (const auto& [k, v] : j.at("pool_overrides").items()) {
      check_keys(v, {"uplift"}, join(pp, k));
      x.uplift_overrides[k] = num(v, "uplift", join(pp, k));
    }
  }
  if (j.contains("published")) {
    const std::string pp = join(path, "published");
    require_object(j.at("published"), pp);
    for (const auto& [k, v] : j.at("published").items()) x.published[k] = as_num(v, join(pp, k));
  }
  x.synthetic_fields = str_list(j, "synthetic_fields", path);
  validate_firm(x, path);
  return x;
}

Json run_to_json(const RunConfig& x) {
  Json waves = Json::array();
  for (const auto& w : x.waves.w) waves.push_back({{"L", w.L}, {"k", w.k}, {"t0", w.t0}});
  const auto& s = x.scenarios;
  return Json{
      {"id", x.id},
      {"c_t", x.c_t},
      {"c_0", x.c_0},
      {"alpha_max", x.alpha_max},
      {"t50_mode", x.t50_mode == T50Mode::Constant ? "constant" : "variable"},
      {"t50_constant", x.t50_constant},
      {"inversion_curve", x.inversion_curve == InversionCurve::Base ? "base" : "firm"},
      {"afc_on_curve", x.afc_on_curve},
      {"waves", waves},
      {"afc_exponents", {{"phi", x.afc_exponents.phi}, {"mu", x.afc_exponents.mu}}},
      {"hold_months", x.hold_months},
      {"k_ramp", x.k_ramp},
      {"capture_lambda", x.capture_lambda},
      {"ces_rho", x.ces_rho},
      {"ces_floor", x.ces_floor},
      {"scale_alpha", x.scale_alpha},
      {"vendor_cap", x.vendor_cap},
      {"cost_rate", x.cost_rate},
      {"cost_years", x.cost_years},
      {"fcf_years", x.fcf_years},
      {"adri_normalization", x.adri_normalization},
      {"hazard_scale", x.hazard_scale},
      {"hazard_horizon_months", x.hazard_horizon_months},
      {"uq_model", x.uq_model},
      {"uq_interrater", x.uq_interrater},
      {"scenarios",
       {{"conservative", s.conservative},
        {"base", s.base},
        {"aggressive", s.aggressive},
        {"weights", {s.w_conservative, s.w_base, s.w_aggressive}}}},
      {"mc",
       {{"draws", x.mc.draws},
        {"seed", x.mc.seed},
        {"exit_multiple", dist_to_json(x.mc.exit_multiple)},
        {"capture", dist_to_json(x.mc.capture)},
        {"cost", dist_to_json(x.mc.cost)},
        {"gap", dist_to_json(x.mc.gap)},
        {"ifs", dist_to_json(x.mc.ifs)}}}};
}

namespace {

ScenarioSet<double> scenarios_from_json(const Json& j, const std::string& path, ScenarioSet<double> s) {
  check_keys(j, {"conservative", "base", "aggressive", "weights"}, path);
  s.conservative = num_or(j, "conservative", path, s.conservative);
  s.base = num_or(j, "base", path, s.base);
  s.aggressive = num_or(j, "aggressive", path, s.aggressive);
  if (j.contains("weights")) {
    const auto w = num_list(j.at("weights"), join(path, "weights"), 3);
    s.w_conservative = w[0];
    s.w_base = w[1];
    s.w_aggressive = w[2];
  }
  try {
    scenario_uq(s);
  } catch (const Error& e) {
    bad(e.detail(), path);
  }
  return s;
}

void require(bool ok, const std::string& what, const std::string& path) {
  if (!ok) bad(what, path);
}

}  // namespace

RunConfig run_from_json(const Json& j, const std::string& path, const RunConfig& defaults) {
  check_keys(j, {"id", "c_t", "c_0", "alpha_max", "t50_mode", "t50_constant", "inversion_curve", "afc_on_curve",
                 "waves", "afc_exponents", "hold_months", "k_ramp", "capture_lambda", "ces_rho", "ces_floor",
                 "scale_alpha", "vendor_cap", "cost_rate", "cost_years", "fcf_years", "adri_normalization",
                 "hazard_scale", "hazard_horizon_months", "uq_model", "uq_interrater", "scenarios", "mc"},
             path);
  RunConfig r = defaults;
  r.id = str_or(j, "id", path, r.id);
  r.c_t = num_or(j, "c_t", path, r.c_t);
  r.c_0 = num_or(j, "c_0", path, r.c_0);
  r.alpha_max = num_or(j, "alpha_max", path, r.alpha_max);
  if (j.contains("t50_mode")) {
    const auto m = str(j, "t50_mode", path);
    if (m == "constant") r.t50_mode = T50Mode::Constant;
    else if (m == "variable") r.t50_mode = T50Mode::Variable;
    else bad("t50_mode must be 'constant' or 'variable'", join(path, "t50_mode"));
  }
  r.t50_constant = num_or(j, "t50_constant", path, r.t50_constant);
  if (j.contains("inversion_curve")) {
    const auto m = str(j, "inversion_curve", path);
    if (m == "base") r.inversion_curve = InversionCurve::Base;
    else if (m == "firm") r.inversion_curve = InversionCurve::Firm;
    else bad("inversion_curve must be 'base' or 'firm'", join(path, "inversion_curve"));
  }
  r.afc_on_curve = bool_or(j, "afc_on_curve", path, r.afc_on_curve);
  if (j.contains("waves")) {
    const std::string wp = join(path, "waves");
    const auto& w = j.at("waves");
    if (!w.is_array() || w.size() != 3) bad("expected three waves", wp);
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string ep = at_index(wp, i);
      check_keys(w[i], {"L", "k", "t0"}, ep);
      r.waves.w[i] = {num(w[i], "L", ep), num(w[i], "k", ep), num(w[i], "t0", ep)};
    }
    try {
      validate_waves(r.waves);
    } catch (const Error& e) {
      bad(e.detail(), wp);
    }
  }
  if (j.contains("afc_exponents")) {
    const std::string ep = join(path, "afc_exponents");
    check_keys(j.at("afc_exponents"), {"phi", "mu"}, ep);
    if (j.at("afc_exponents").contains("phi")) {
      const auto v = num_list(j.at("afc_exponents").at("phi"), join(ep, "phi"), 3);
      std::copy(v.begin(), v.end(), r.afc_exponents.phi.begin());
    }
    if (j.at("afc_exponents").contains("mu")) {
      const auto v = num_list(j.at("afc_exponents").at("mu"), join(ep, "mu"), 3);
      std::copy(v.begin(), v.end(), r.afc_exponents.mu.begin());
    }
    require(r.afc_exponents.phi[0] < r.afc_exponents.phi[1] && r.afc_exponents.phi[1] < r.afc_exponents.phi[2],
            "ceiling exponents must be strictly increasing", join(ep, "phi"));
    for (double m : r.afc_exponents.mu) require(m > 0.0, "timing exponents must be positive", join(ep, "mu"));
  }
  r.hold_months = num_or(j, "hold_months", path, r.hold_months);
  r.k_ramp = num_or(j, "k_ramp", path, r.k_ramp);
  r.capture_lambda = num_or(j, "capture_lambda", path, r.capture_lambda);
  r.ces_rho = num_or(j, "ces_rho", path, r.ces_rho);
  r.ces_floor = num_or(j, "ces_floor", path, r.ces_floor);
  r.scale_alpha = num_or(j, "scale_alpha", path, r.scale_alpha);
  r.vendor_cap = num_or(j, "vendor_cap", path, r.vendor_cap);
  r.cost_rate = num_or(j, "cost_rate", path, r.cost_rate);
  r.cost_years = int_or(j, "cost_years", path, r.cost_years);
  r.fcf_years = int_or(j, "fcf_years", path, r.fcf_years);
  r.adri_normalization = num_or(j, "adri_normalization", path, r.adri_normalization);
  r.hazard_scale = num_or(j, "hazard_scale", path, r.hazard_scale);
  r.hazard_horizon_months = num_or(j, "hazard_horizon_months", path, r.hazard_horizon_months);
  r.uq_model = num_or(j, "uq_model", path, r.uq_model);
  r.uq_interrater = num_or(j, "uq_interrater", path, r.uq_interrater);
  if (j.contains("scenarios")) r.scenarios = scenarios_from_json(j.at("scenarios"), join(path, "scenarios"), r.scenarios);
  if (j.contains("mc")) {
    const std::string mp = join(path, "mc");
    const auto& m = j.at("mc");
    check_keys(m, {"draws", "seed", "exit_multiple", "capture", "cost", "gap", "ifs"}, mp);
    r.mc.draws = u64_or(m, "draws", mp, r.mc.draws);
    r.mc.seed = u64_or(m, "seed", mp, r.mc.seed);
    if (m.contains("exit_multiple")) r.mc.exit_multiple = dist_from_json(m.at("exit_multiple"), join(mp, "exit_multiple"), r.mc.exit_multiple);
    if (m.contains("capture")) r.mc.capture = dist_from_json(m.at("capture"), join(mp, "capture"), r.mc.capture);
    if (m.contains("cost")) r.mc.cost = dist_from_json(m.at("cost"), join(mp, "cost"), r.mc.cost);
    if (m.contains("gap")) r.mc.gap = dist_from_json(m.at("gap"), join(mp, "gap"), r.mc.gap);
    if (m.contains("ifs")) r.mc.ifs = dist_from_json(m.at("ifs"), join(mp, "ifs"), r.mc.ifs);
    require(r.mc.draws >= 2, "at least two draws are required", join(mp, "draws"));
  }

  require(r.c_t > 0.0, "capability index must be positive", join(path, "c_t"));
  require(r.c_0 > 0.0, "baseline capability must be positive", join(path, "c_0"));
  require(r.alpha_max >= 1.0, "alpha_max must be at least 1", join(path, "alpha_max"));
  require(r.t50_constant > 0.0, "t50 must be positive", join(path, "t50_constant"));
  require(r.hold_months > 0.0, "hold period must be positive", join(path, "hold_months"));
  require(r.k_ramp > 0.0, "ramp steepness must be positive", join(path, "k_ramp"));
  require(r.capture_lambda > 0.0, "capture lambda must be positive", join(path, "capture_lambda"));
  require(r.ces_rho > 0.0, "CES rho must be positive", join(path, "ces_rho"));
  require(r.ces_floor > 0.0 && r.ces_floor < 1.0, "CES floor must lie in (0, 1)", join(path, "ces_floor"));
  require(r.scale_alpha > 0.0, "scale alpha must be positive", join(path, "scale_alpha"));
  require(r.vendor_cap > 0.0 && r.vendor_cap <= 1.0, "vendor cap must lie in (0, 1]", join(path, "vendor_cap"));
  require(r.cost_rate >= 0.0, "cost rate must be nonnegative", join(path, "cost_rate"));
  require(r.cost_years >= 1, "cost years must be at least 1", join(path, "cost_years"));
  require(r.fcf_years >= 1, "FCF years must be at least 1", join(path, "fcf_years"));
  require(r.adri_normalization > 0.0, "ADRI normalization must be positive", join(path, "adri_normalization"));
  require(r.hazard_scale > 0.0, "hazard scale must be positive", join(path, "hazard_scale"));
  require(r.hazard_horizon_months >= 0.0, "horizon must be nonnegative", join(path, "hazard_horizon_months"));
  require(r.uq_model >= 0.0, "model uncertainty must be nonnegative", join(path, "uq_model"));
  require(r.uq_interrater >= 0.0, "interrater uncertainty must be nonnegative", join(path, "uq_interrater"));
  return r;
}

Json survey_to_json(const SurveyResponse& x) {
  Json answers = Json::array();
  for (const auto& a : x.answers) {
    Json e{{"answer", a.answer}, {"evidence", a.evidence}};
    if (!a.citation.empty()) e["citation"] = a.citation;
    answers.push_back(e);
  }
  return Json{{"answers", answers}, {"q25", x.q25}};
}

SurveyResponse survey_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"id", "firm", "answers", "q25"}, path);
  SurveyResponse r;
  const std::string ap = join(path, "answers");
  if (!j.contains("answers")) bad("missing field 'answers'", ap);
  const auto& a = j.at("answers");
  if (!a.is_array() || a.size() != 24) bad("expected 24 answers (Q1-Q24)", ap);
  for (std::size_t i = 0; i < 24; ++i) {
    const std::string ep = at_index(ap, i);
    auto& out = r.answers[i];
    if (a[i].is_number_integer()) {
      out.answer = a[i].get<int>();
    } else {
      check_keys(a[i], {"answer", "evidence", "citation"}, ep);
      if (!a[i].contains("answer") || !a[i].at("answer").is_number_integer())
        bad("expected an integer answer", join(ep, "answer"));
      out.answer = a[i].at("answer").get<int>();
      out.evidence = bool_or(a[i], "evidence", ep, false);
      out.citation = str_or(a[i], "citation", ep, "");
    }
    if (out.answer < 0 || out.answer > 4) bad("answer must lie in 0-4", ep);
    if (out.evidence && a[i].is_object() && a[i].contains("citation") && out.citation.empty())
      bad("evidence flag requires a citation", join(ep, "citation"));
  }
  if (j.contains("q25")) {
    const std::string qp = join(path, "q25");
    const auto& q = j.at("q25");
    if (!q.is_array() || q.size() != 5) bad("expected five Q25 sub-answers", qp);
    for (std::size_t i = 0; i < 5; ++i) {
      if (!q[i].is_number_integer()) bad("expected an integer", at_index(qp, i));
      r.q25[i] = q[i].get<int>();
      if (r.q25[i] < 0 || r.q25[i] > 4) bad("sub-answer must lie in 0-4", at_index(qp, i));
    }
  }
  return r;
}

Json options_to_json(const EvalOptions& x) {
  Json j = Json::object();
  if (x.t_hat) j["t_hat"] = *x.t_hat;
  const auto& p = x.perturbation;
  Json pj = Json::object();
  if (p.exit_multiple) pj["exit_multiple"] = *p.exit_multiple;
  if (p.capture_mult != 1.0) pj["capture_mult"] = p.capture_mult;
  if (p.cost_mult != 1.0) pj["cost_mult"] = p.cost_mult;
  if (p.gap_shift != 0.0) pj["gap_shift"] = p.gap_shift;
  if (p.ifs_shift != 0.0) pj["ifs_shift"] = p.ifs_shift;
  if (!pj.empty()) j["perturbation"] = pj;
  return j;
}

EvalOptions options_from_json(const Json& j, const std::string& path) {
  check_keys(j, {"t_hat", "perturbation"}, path);
  EvalOptions o;
  o.t_hat = opt_num(j, "t_hat", path);
  if (j.contains("perturbation")) {
    const std::string pp = join(path, "perturbation");
    const auto& p = j.at("perturbation");
    check_keys(p, {"exit_multiple", "capture_mult", "cost_mult", "gap_shift", "ifs_shift"}, pp);
    o.perturbation.exit_multiple = opt_num(p, "exit_multiple", pp);
    o.perturbation.capture_mult = num_or(p, "capture_mult", pp, 1.0);
    o.perturbation.cost_mult = num_or(p, "cost_mult", pp, 1.0);
    o.perturbation.gap_shift = num_or(p, "gap_shift", pp, 0.0);
    o.perturbation.ifs_shift = num_or(p, "ifs_shift", pp, 0.0);
  }
  return o;
}

// ---- bundle ----------------------------------------------------------------

const IndustryCalibration& WorkspaceBundle::industry(const std::string& id) const {
  for (const auto& x : industries)
    if (x.id == id) return x;
  throw Error("input", "unknown industry id '" + id + "'", "industry");
}

const FirmProfile& WorkspaceBundle::firm(const std::string& id) const {
  for (const auto& x : firms)
    if (x.id == id) return x;
  throw Error("input", "unknown firm id '" + id + "'", "firm");
}

const RunConfig& WorkspaceBundle::run(const std::string& id) const {
  const auto it = runs.find(id);
  if (it == runs.end()) throw Error("input", "unknown run '" + id + "'", "run");
  return it->second;
}

const SurveySubmission& WorkspaceBundle::survey(const std::string& id) const {
  for (const auto& x : surveys)
    if (x.id == id) return x;
  throw Error("input", "unknown survey id '" + id + "'", "survey");
}

bool WorkspaceBundle::has_industry(const std::string& id) const {
  return std::any_of(industries.begin(), industries.end(), [&](const auto& x) { return x.id == id; });
}

bool WorkspaceBundle::has_firm(const std::string& id) const {
  return std::any_of(firms.begin(), firms.end(), [&](const auto& x) { return x.id == id; });
}

namespace {

const char* const kRequiredFiles[] = {"registry.json", "pools.json", "firms.json", "runs.json"};
const char* const kOptionalFiles[] = {"backtest.json", "surveys.json"};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("input", "cannot open file", p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json resolve_run(const Json& runs, const std::string& name, std::vector<std::string>& chain) {
  if (std::find(chain.begin(), chain.end(), name) != chain.end())
    bad("run inheritance cycle through '" + name + "'", "runs.json: runs." + name + ".base");
  if (!runs.contains(name)) bad("unknown base run '" + name + "'", "runs.json: runs." + chain.back() + ".base");
  const Json& own = runs.at(name);
  if (!own.is_object()) bad("run must be an object", "runs.json: runs." + name);
  chain.push_back(name);
  Json merged = Json::object();
  if (own.contains("base")) {
    if (!own.at("base").is_string()) bad("base must name a run", "runs.json: runs." + name + ".base");
    merged = resolve_run(runs, own.at("base").get<std::string>(), chain);
  }
  Json patch = own;
  patch.erase("base");
  merged.merge_patch(patch);
  chain.pop_back();
  return merged;
}

}  // namespace

WorkspaceBundle load_workspace_texts(const std::map<std::string, std::string>& files) {
  WorkspaceBundle b;
  auto text_of = [&](const char* name) -> const std::string& {
    const auto it = files.find(name);
    if (it == files.end()) bad("missing workspace file", name);
    return it->second;
  };
  for (const auto& [name, text] : files) {
    const bool known = std::any_of(std::begin(kRequiredFiles), std::end(kRequiredFiles), [&](const char* f) { return name == f; }) ||
                       std::any_of(std::begin(kOptionalFiles), std::end(kOptionalFiles), [&](const char* f) { return name == f; });
    if (!known) b.warnings.push_back("ignored unrecognized workspace file '" + name + "'");
    b.sources[name] = text;
  }

  // Parse every file before building anything so a bad file leaves no partial state.
  std::map<std::string, Json> docs;
  for (const char* f : kRequiredFiles) docs[f] = parse_json_text(text_of(f), f);
  for (const char* f : kOptionalFiles)
    if (files.count(f)) docs[f] = parse_json_text(files.at(f), f);
  for (const auto& [name, doc] : docs) check_schema(doc, name);

  {
    const std::string& text = files.at("registry.json");
    const Json& doc = docs["registry.json"];
    check_keys(doc, {"schema_version", "industries"}, "registry.json");
    const Json& arr = array_field(doc, "industries", "registry.json");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at_index("industries", i);
      auto ind = with_location("registry.json", text, record_id(arr[i]), [&] { return industry_from_json(arr[i], p); });
      if (!seen.insert(ind.id).second)
        throw Error("input", "duplicate industry id '" + ind.id + "' [" + locate("registry.json", text, ind.id, "") + "]", p + ".id");
      if (std::abs(compute_psi(ind.rff()) - ind.psi) > 1e-3)
        b.warnings.push_back(p + ".psi: differs from the RFF floor " + std::to_string(compute_psi(ind.rff())));
      b.industries.push_back(std::move(ind));
    }
  }
  {
    const std::string& text = files.at("pools.json");
    const Json& doc = docs["pools.json"];
    check_keys(doc, {"schema_version", "pools"}, "pools.json");
    const Json& arr = array_field(doc, "pools", "pools.json");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at_index("pools", i);
      auto pool = with_location("pools.json", text, record_id(arr[i]), [&] { return pool_from_json(arr[i], p); });
      if (!seen.insert(pool.name).second) throw Error("input", "duplicate pool name '" + pool.name + "'", p + ".name");
      b.pools.push_back(std::move(pool));
    }
    if (b.pools.empty()) bad("at least one value pool is required", "pools.json: pools");
  }
  {
    const std::string& text = files.at("firms.json");
    const Json& doc = docs["firms.json"];
    check_keys(doc, {"schema_version", "firms"}, "firms.json");
    const Json& arr = array_field(doc, "firms", "firms.json");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at_index("firms", i);
      auto firm = with_location("firms.json", text, record_id(arr[i]), [&] { return firm_from_json(arr[i], p); });
      if (!seen.insert(firm.id).second) throw Error("input", "duplicate firm id '" + firm.id + "'", p + ".id");
      if (!b.has_industry(firm.industry))
        throw Error("input",
                    "unknown industry id '" + firm.industry + "' [" + locate("firms.json", text, firm.id, "industry") + "]",
                    p + ".industry");
      for (const auto& [pool, u] : firm.uplift_overrides) {
        (void)u;
        if (std::none_of(b.pools.begin(), b.pools.end(), [&](const auto& s) { return s.name == pool; }))
          throw Error("input", "override names unknown pool '" + pool + "'", p + ".pool_overrides." + pool);
      }
      b.firms.push_back(std::move(firm));
    }
  }
  {
    const Json& doc = docs["runs.json"];
    check_keys(doc, {"schema_version", "frontier", "runs"}, "runs.json");
    RunConfig defaults;
    if (doc.contains("frontier")) {
      const std::string fp = "runs.json: frontier";
      const Json& f = doc.at("frontier");
      check_keys(f, {"capability_weights", "ewma_lambda", "composites", "scenarios"}, fp);
      if (f.contains("capability_weights")) {
        const auto w = num_list(f.at("capability_weights"), fp + ".capability_weights");
        b.frontier.capability_weights = Eigen::Map<const VecXd>(w.data(), static_cast<Eigen::Index>(w.size()));
        if ((b.frontier.capability_weights.array() <= 0.0).any() ||
            std::abs(b.frontier.capability_weights.sum() - 1.0) > 1e-9)
          bad("capability weights must be positive and sum to 1", fp + ".capability_weights");
      }
      b.frontier.ewma_lambda = num_or(f, "ewma_lambda", fp, b.frontier.ewma_lambda);
      if (!(b.frontier.ewma_lambda > 0.0 && b.frontier.ewma_lambda <= 1.0))
        bad("smoothing lambda outside (0, 1]", fp + ".ewma_lambda");
      if (f.contains("composites")) {
        const auto& c = f.at("composites");
        if (!c.is_array()) bad("expected an array", fp + ".composites");
        for (std::size_t i = 0; i < c.size(); ++i) {
          const std::string cp = at_index(fp + ".composites", i);
          check_keys(c[i], {"label", "c_t"}, cp);
          const double ct = num(c[i], "c_t", cp);
          if (!(ct > 0.0)) bad("capability index must be positive", cp + ".c_t");
          b.frontier.composites.emplace_back(str(c[i], "label", cp), ct);
        }
      }
      if (f.contains("scenarios"))
        b.frontier.scenarios = scenarios_from_json(f.at("scenarios"), fp + ".scenarios", b.frontier.scenarios);
      defaults.scenarios = b.frontier.scenarios;
    }
    if (!doc.contains("runs") || !doc.at("runs").is_object()) bad("expected object 'runs'", "runs.json: runs");
    const Json& runs = doc.at("runs");
    for (const auto& [name, v] : runs.items()) {
      (void)v;
      std::vector<std::string> chain;
      Json resolved = resolve_run(runs, name, chain);
      resolved["id"] = name;
      b.runs[name] = run_from_json(resolved, "runs.json: runs." + name, defaults);
    }
    if (!b.runs.count("default")) bad("a 'default' run is required", "runs.json: runs");
  }
  if (docs.count("backtest.json")) {
    const Json& doc = docs["backtest.json"];
    const std::string bp = "backtest.json: backtest";
    check_keys(doc, {"schema_version", "backtest"}, "backtest.json");
    if (!doc.contains("backtest")) bad("missing field 'backtest'", bp);
    const Json& bt = doc.at("backtest");
    check_keys(bt, {"firms", "aitg_2021", "delta_margin_pp"}, bp);
    BacktestFixture f;
    f.firms = str_list(bt, "firms", bp);
    if (!bt.contains("aitg_2021") || !bt.contains("delta_margin_pp")) bad("missing backtest series", bp);
    const auto a = num_list(bt.at("aitg_2021"), bp + ".aitg_2021", f.firms.size());
    const auto m = num_list(bt.at("delta_margin_pp"), bp + ".delta_margin_pp", f.firms.size());
    if (f.firms.size() < 3) bad("at least three observations are required", bp + ".firms");
    f.aitg = Eigen::Map<const VecXd>(a.data(), static_cast<Eigen::Index>(a.size()));
    f.delta_margin_pp = Eigen::Map<const VecXd>(m.data(), static_cast<Eigen::Index>(m.size()));
    b.backtest = std::move(f);
  }
  if (docs.count("surveys.json")) {
    const std::string& text = files.at("surveys.json");
    const Json& doc = docs["surveys.json"];
    check_keys(doc, {"schema_version", "surveys"}, "surveys.json");
    const Json& arr = array_field(doc, "surveys", "surveys.json");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = at_index("surveys", i);
      SurveySubmission s;
      s.id = with_location("surveys.json", text, record_id(arr[i]), [&] { return str(arr[i], "id", p); });
      s.firm = str_or(arr[i], "firm", p, "");
      s.response = with_location("surveys.json", text, s.id, [&] { return survey_from_json(arr[i], p); });
      if (!seen.insert(s.id).second) throw Error("input", "duplicate survey id '" + s.id + "'", p + ".id");
      if (!s.firm.empty() && !b.has_firm(s.firm))
        throw Error("input", "survey references unknown firm id '" + s.firm + "'", p + ".firm");
      b.surveys.push_back(std::move(s));
    }
  }
  return b;
}

WorkspaceBundle load_workspace(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw Error("input", "workspace not found", path.string());
  std::map<std::string, std::string> files;
  if (fs::is_directory(path)) {
    for (const char* f : kRequiredFiles) {
      if (!fs::exists(path / f)) throw Error("input", "missing workspace file", (path / f).string());
      files[f] = read_file(path / f);
    }
    for (const char* f : kOptionalFiles)
      if (fs::exists(path / f)) files[f] = read_file(path / f);
  } else {
    const std::string name = path.filename().string();
    const Json doc = parse_json_text(read_file(path), name);
    check_schema(doc, name);
    check_keys(doc, {"schema_version", "kind", "files"}, name);
    if (!doc.contains("kind") || doc.at("kind") != kArchiveKind)
      throw Error("input", std::string("not a workspace archive (kind must be '") + kArchiveKind + "')", name + ": kind");
    if (!doc.contains("files") || !doc.at("files").is_object())
      throw Error("input", "expected object 'files'", name + ": files");
    for (const auto& [k, v] : doc.at("files").items()) files[k] = v.is_string() ? v.get<std::string>() : v.dump(2);
  }
  return load_workspace_texts(files);
}

Json archive_json(const WorkspaceBundle& b) {
  Json files = Json::object();
  for (const auto& [name, text] : b.sources) files[name] = Json::parse(text);
  return Json{{"schema_version", kSchemaVersion}, {"kind", kArchiveKind}, {"files", files}};
}

void save_archive(const WorkspaceBundle& b, const std::filesystem::path& file) {
  const std::string text = archive_json(b).dump(2) + "\n";
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("input", "cannot write archive", tmp.string());
    out << text;
    if (!out) throw Error("input", "write failed", tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

PipelineReport evaluate_firm(const WorkspaceBundle& b, const std::string& firm_id, const RunConfig& run,
                             const EvalOptions& opt) {
  return evaluate_profile(b, b.firm(firm_id), run, opt);
}

PipelineReport evaluate_profile(const WorkspaceBundle& b, const FirmProfile& firm, const RunConfig& run,
                                const EvalOptions& opt) {
  const IndustryCalibration& industry = b.industry(firm.industry);
  Json pools = Json::array();
  for (const auto& p : b.pools) pools.push_back(pool_to_json(p));
  const Json inputs{{"industry", industry_to_json(industry)},
                    {"pools", pools},
                    {"firm", firm_to_json(firm)},
                    {"run", run_to_json(run)},
                    {"options", options_to_json(opt)}};
  PipelineReport r = evaluate(industry, b.pools, firm, run, opt);
  r.inputs = inputs.dump();
  r.input_digest = sha256_hex(r.inputs);
  return r;
}

}  // namespace aitg
