#include "aitg/service.hpp"

#include <httplib.h>

#include <regex>
#include <thread>

namespace aitg {

namespace {

struct HttpError {
  int status;
  std::string stage;
  std::string message;
  std::string path;
};

ServiceResponse json_response(int status, const Json& j) {
  return {status, j.dump(2) + "\n", {{"Content-Type", "application/json"}}};
}

ServiceResponse error_response(int status, const std::string& stage, const std::string& message,
                               const std::string& path) {
  return json_response(status, {{"error", {{"status", status}, {"stage", stage}, {"message", message}, {"path", path}}}});
}

Json parse_body(const std::string& body) {
  if (body.empty()) throw HttpError{400, "input", "request body is empty", "body"};
  try {
    return parse_json_text(body, "body");
  } catch (const Error& e) {
    throw HttpError{400, e.stage(), e.detail(), e.path()};
  }
}

void allow_keys(const Json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw HttpError{400, "input", "request body must be an object", "body"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
      throw HttpError{422, "input", "unknown field '" + k + "'", "body." + k};
  }
}

std::uint64_t uint_field(const Json& j, const char* key, std::uint64_t dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw HttpError{422, "input", "expected a nonnegative integer", std::string("body.") + key};
  return v.get<std::uint64_t>();
}

}  // namespace

Service::Service(WorkspaceBundle bundle, std::filesystem::path archive_dir, unsigned mc_workers)
    : bundle_(std::move(bundle)), archive_(std::move(archive_dir)), mc_workers_(mc_workers) {
  auto m = std::make_shared<FirmMap>();
  for (const auto& f : bundle_.firms) m->emplace(f.id, f);
  firms_ = std::move(m);
  if (mc_workers_ == 0) mc_workers_ = std::max(1u, std::thread::hardware_concurrency());
  server_ = std::make_unique<httplib::Server>();
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = handle(req.method, req.path, req.body);
    res.status = r.status;
    for (const auto& [k, v] : r.headers)
      if (k != "Content-Type") res.set_header(k, v);
    res.set_content(r.body, "application/json");
  };
  server_->Get(".*", route);
  server_->Post(".*", route);
  server_->Put(".*", route);
}

Service::~Service() { stop(); }

std::shared_ptr<const Service::FirmMap> Service::snapshot() const {
  std::lock_guard lock(snap_mu_);
  return firms_;
}

ServiceResponse Service::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    return dispatch(method, path, body);
  } catch (const HttpError& e) {
    return error_response(e.status, e.stage, e.message, e.path);
  } catch (const Error& e) {
    return error_response(422, e.stage(), e.detail(), e.path());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what(), "");
  }
}

ServiceResponse Service::dispatch(const std::string& method, const std::string& path, const std::string& body) {
  const auto snap = snapshot();

  auto firm_by_id = [&](const std::string& id, const std::string& at) -> const FirmProfile& {
    const auto it = snap->find(id);
    if (it == snap->end()) throw HttpError{404, "input", "unknown firm id '" + id + "'", at};
    return it->second;
  };
  // "firm" is an id or a full profile object.
  auto firm_spec = [&](const Json& j) -> FirmProfile {
    if (!j.contains("firm")) throw HttpError{422, "input", "missing field 'firm'", "body.firm"};
    const Json& f = j.at("firm");
    FirmProfile p = f.is_string() ? firm_by_id(f.get<std::string>(), "body.firm") : firm_from_json(f, "body.firm");
    if (!bundle_.has_industry(p.industry))
      throw HttpError{422, "input", "unknown industry id '" + p.industry + "'", "body.firm.industry"};
    return p;
  };
  // "run" is a run name or an object of overrides on "base" (default "default").
  auto run_spec = [&](const Json& j) -> RunConfig {
    if (!j.contains("run")) return bundle_.run("default");
    const Json& r = j.at("run");
    auto named = [&](const std::string& name, const std::string& at) -> const RunConfig& {
      if (!bundle_.runs.count(name)) throw HttpError{404, "input", "unknown run '" + name + "'", at};
      return bundle_.runs.at(name);
    };
    if (r.is_string()) return named(r.get<std::string>(), "body.run");
    if (!r.is_object()) throw HttpError{422, "input", "run must be a name or an object", "body.run"};
    Json over = r;
    std::string base = "default";
    if (over.contains("base")) {
      if (!over["base"].is_string()) throw HttpError{422, "input", "base must name a run", "body.run.base"};
      base = over["base"].get<std::string>();
      over.erase("base");
    }
    RunConfig rc = run_from_json(over, "body.run", named(base, "body.run.base"));
    if (!over.contains("id")) rc.id = base + "+overrides";
    return rc;
  };
  auto options_spec = [&](const Json& j) -> EvalOptions {
    return j.contains("options") ? options_from_json(j.at("options"), "body.options") : EvalOptions{};
  };
  auto report_response = [&](const PipelineReport& r) {
    const Json out = report_to_json(r);
    ServiceResponse resp = json_response(200, out);
    resp.headers["X-Report-Id"] = archive_.put(out);
    return resp;
  };

  static const std::regex firm_re("^/firms/([^/]+)$");
  static const std::regex report_re("^/reports/([0-9a-f]{64})$");
  std::smatch m;

  if (method == "GET") {
    if (path == "/health") return json_response(200, {{"status", "ok"}, {"engine_version", kEngineVersion}});
    if (path == "/industries") {
      Json a = Json::array();
      for (const auto& i : bundle_.industries) {
        Json x = industry_to_json(i);
        x["iass_base"] = i.iass_base();
        a.push_back(x);
      }
      return json_response(200, {{"industries", a}});
    }
    if (path == "/firms") {
      Json a = Json::array();
      for (const auto& [id, f] : *snap) a.push_back({{"id", id}, {"name", f.name}, {"industry", f.industry}});
      return json_response(200, {{"firms", a}});
    }
    if (path == "/runs") {
      Json a = Json::object();
      for (const auto& [id, r] : bundle_.runs) a[id] = run_to_json(r);
      return json_response(200, {{"runs", a}});
    }
    if (path == "/bounds") {
      const char* names[] = {"occ", "dr", "vtr", "crs", "reg"};
      Json d = Json::object();
      for (std::size_t i = 0; i < 5; ++i) d[names[i]] = {kDeltaRanges[i].lo, kDeltaRanges[i].hi};
      return json_response(200, {{"ifs", d},
                                 {"dimension_score", {0.0, 10.0}},
                                 {"survey_answer", {0, 4}},
                                 {"theta", {kThetaMin, kThetaMax}},
                                 {"grid_points", 9}});
    }
    if (path == "/reports") return json_response(200, {{"reports", archive_.ids()}});
    if (std::regex_match(path, m, report_re)) {
      const auto r = archive_.get(m[1]);
      if (!r) throw HttpError{404, "input", "unknown report id", "id"};
      return json_response(200, *r);
    }
    if (std::regex_match(path, m, firm_re)) return json_response(200, firm_to_json(firm_by_id(m[1], "id")));
  }

  if (method == "PUT" && std::regex_match(path, m, firm_re)) {
    const std::string id = m[1];
    const Json j = parse_body(body);
    FirmProfile p = firm_from_json(j, "body");
    if (p.id != id) throw HttpError{422, "input", "profile id does not match the URL", "body.id"};
    if (!bundle_.has_industry(p.industry))
      throw HttpError{422, "input", "unknown industry id '" + p.industry + "'", "body.industry"};
    for (const auto& [pool, u] : p.uplift_overrides) {
      (void)u;
      if (std::none_of(bundle_.pools.begin(), bundle_.pools.end(), [&](const auto& s) { return s.name == pool; }))
        throw HttpError{422, "input", "override names unknown pool '" + pool + "'", "body.pool_overrides." + pool};
    }
    std::lock_guard writer(writer_mu_);
    auto next = std::make_shared<FirmMap>(*snapshot());
    const bool created = !next->count(id);
    (*next)[id] = p;
    {
      std::lock_guard lock(snap_mu_);
      firms_ = std::move(next);
    }
    return json_response(created ? 201 : 200, firm_to_json(p));
  }

  if (method == "POST") {
    if (path == "/evaluate") {
      const Json j = parse_body(body);
      allow_keys(j, {"firm", "run", "options"});
      return report_response(evaluate_profile(bundle_, firm_spec(j), run_spec(j), options_spec(j)));
    }
    if (path == "/whatif") {
      const Json j = parse_body(body);
      allow_keys(j, {"firm", "run", "options", "score_deltas", "set"});
      FirmProfile p = firm_spec(j);
      Json pj = firm_to_json(p);
      if (j.contains("set")) {
        if (!j["set"].is_object()) throw HttpError{422, "input", "set must be an object", "body.set"};
        pj.merge_patch(j["set"]);
      }
      if (j.contains("score_deltas")) {
        const Json& d = j["score_deltas"];
        if (!d.is_object()) throw HttpError{422, "input", "score_deltas must be an object", "body.score_deltas"};
        for (const auto& [k, v] : d.items()) {
          if (!pj["scores"].contains(k)) throw HttpError{422, "input", "unknown dimension '" + k + "'", "body.score_deltas." + k};
          if (!v.is_number()) throw HttpError{422, "input", "expected a number", "body.score_deltas." + k};
          pj["scores"][k] = pj["scores"][k].get<double>() + v.get<double>();
        }
      }
      p = firm_from_json(pj, "body.firm");
      return report_response(evaluate_profile(bundle_, p, run_spec(j), options_spec(j)));
    }
    if (path == "/mc") {
      const Json j = parse_body(body);
      allow_keys(j, {"firm", "run", "options", "draws", "seed", "workers"});
      const FirmProfile p = firm_spec(j);
      const RunConfig run = run_spec(j);
      const auto draws = uint_field(j, "draws", run.mc.draws);
      const auto seed = uint_field(j, "seed", run.mc.seed);
      const auto workers = static_cast<unsigned>(uint_field(j, "workers", mc_workers_));
      if (draws < 2) throw HttpError{422, "input", "at least two draws are required", "body.draws"};
      if (workers < 1) throw HttpError{422, "input", "at least one worker is required", "body.workers"};
      const McReport mc = run_monte_carlo(bundle_.industry(p.industry), bundle_.pools, p, run, draws, seed, workers,
                                          options_spec(j));
      return json_response(200, mc_to_json(mc, p.id));
    }
    if (path == "/grid") {
      const Json j = parse_body(body);
      allow_keys(j, {"firm", "run", "options", "n"});
      FirmProfile p = firm_spec(j);
      const RunConfig run = run_spec(j);
      const EvalOptions opt = options_spec(j);
      const auto n = static_cast<int>(uint_field(j, "n", 9));
      if (n < 2 || n > 101) throw HttpError{422, "input", "grid size must lie in 2-101", "body.n"};
      const auto occ_r = kDeltaRanges[0], dr_r = kDeltaRanges[1];
      Json occ = Json::array(), dr = Json::array(), rows = Json::array();
      for (int a = 0; a < n; ++a) occ.push_back(occ_r.lo + (occ_r.hi - occ_r.lo) * a / (n - 1));
      for (int b = 0; b < n; ++b) dr.push_back(dr_r.lo + (dr_r.hi - dr_r.lo) * b / (n - 1));
      const auto& industry = bundle_.industry(p.industry);
      for (int a = 0; a < n; ++a) {
        Json row = Json::array();
        for (int b = 0; b < n; ++b) {
          FirmProfile q = p;
          q.ifs.occ = occ[static_cast<std::size_t>(a)].get<double>();
          q.ifs.dr = dr[static_cast<std::size_t>(b)].get<double>();
          row.push_back(evaluate(industry, bundle_.pools, q, run, opt).vcb.delta_ev);
        }
        rows.push_back(row);
      }
      return json_response(200, {{"firm", p.id},
                                 {"run", run.id},
                                 {"occ", occ},
                                 {"dr", dr},
                                 {"delta_ev", rows},
                                 {"unit", "USD bn"},
                                 {"layout", "delta_ev[i][j] at occ[i], dr[j]"}});
    }
    if (path == "/survey") {
      const Json j = parse_body(body);
      const SurveyResponse resp = survey_from_json(j, "body");
      const SurveyResult sr = score_survey(resp);
      Json out = survey_result_to_json(sr);
      if (j.contains("firm")) {
        if (!j["firm"].is_string()) throw HttpError{422, "input", "firm must be an id", "body.firm"};
        FirmProfile p = firm_by_id(j["firm"].get<std::string>(), "body.firm");
        p.dims = sr.dims;
        p.ifs = sr.ifs;
        out["profile"] = firm_to_json(p);
      }
      return json_response(200, out);
    }
  }
  throw HttpError{404, "input", "no route for " + method + " " + path, "path"};
}

bool Service::listen(const std::string& host, int port) {
  if (port == 0) {
    const int p = server_->bind_to_any_port(host);
    if (p <= 0) return false;
    port_ = p;
  } else {
    if (!server_->bind_to_port(host, port)) return false;
    port_ = port;
  }
  return server_->listen_after_bind();
}

void Service::stop() { server_->stop(); }

bool Service::running() const { return server_->is_running(); }

}  // namespace aitg
