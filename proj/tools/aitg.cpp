#include "aitg/report.hpp"
#include "aitg/service.hpp"
#include "aitg/workspace.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#ifndef AITG_DEFAULT_WORKSPACE
#define AITG_DEFAULT_WORKSPACE "data"
#endif

namespace {

using aitg::Json;

struct Globals {
  std::string workspace;
  std::string format = "table";
  std::string run = "default";
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

const std::vector<std::string> kAnchorIndustries{"vertical-saas", "commercial-banking", "logistics",
                                                 "healthcare-services", "construction"};

std::string f(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void emit(const Globals& g, const Json& j, const std::string& table) {
  if (g.format == "json") std::cout << j.dump(2) << "\n";
  else std::cout << table;
}

unsigned workers_of(const Globals& g) {
  return g.workers ? g.workers : std::max(1u, std::thread::hardware_concurrency());
}

std::string curve_table(const aitg::PipelineReport& r, const aitg::FirmCurve<double>& c) {
  std::string o = r.firm_name + " trajectory\n";
  o += "  t_hat " + f("%.1f", r.t_hat) + " months [" + r.t_hat_source + "], wave zone " + std::to_string(r.wave_zone) + "\n";
  o += "  t50 " + f("%.1f", r.t50) + " (base " + f("%.1f", r.t50_base) + "), delay x" + f("%.3f", r.delay) +
       ", steepness x" + f("%.3f", r.k_multiplier) + "\n";
  o += "  month   base curve   firm curve\n";
  for (int t = 0; t <= 120; t += 12)
    o += "  " + f("%5.0f", t) + "   " + f("%10.3f", aitg::aitg_at<double>(t, c.base)) + "   " +
         f("%10.3f", aitg::aitg_at<double>(t, c.adjusted)) + "\n";
  return o;
}

std::string vcb_steps(const aitg::PipelineReport& r) {
  const auto& v = r.vcb;
  std::string o = r.firm_name + " value creation bridge\n";
  int step = 1;
  auto line = [&](const std::string& label, const std::string& val) {
    o += "  " + f("%2.0f", step++) + ". " + label + std::string(label.size() < 34 ? 34 - label.size() : 1, ' ') + val + "\n";
  };
  line("Firm scale factor Phi", f("%.3f", v.phi));
  std::string bs;
  for (const auto& p : v.pools) bs += p.name + " " + f("%.3f", p.b) + "  ";
  line("CES bottleneck b_p", bs);
  line("Gap fraction eta", f("%.3f", v.eta));
  std::string cs;
  for (const auto& p : v.pools) cs += p.name + " " + f("%.3f", p.capture) + "  ";
  line("Capture c_p" + std::string(v.rescaled ? " (rescaled)" : ""), cs);
  line("Pool value sum V_p (USD m/yr)", f("%.1f", 1000.0 * v.pool_sum));
  line("Ramp midpoint t50 (months)", f("%.1f", r.t50));
  line("Incremental ramp dR", f("%.3f", v.delta_r) + " (" + f("%.3f", v.r0) + " -> " + f("%.3f", v.r_end) + ")");
  line("IFS residual", f("%.3f", v.ifs_resid));
  line("Terminal value (USD m)", f("%.1f", 1000.0 * v.tv) + " at " + f("%.1f", v.exit_multiple) + "x");
  line("dEV = TV + FCF - cost (USD m)", f("%.1f", 1000.0 * v.tv) + " + " + f("%.1f", 1000.0 * v.fcf) + " - " +
                                            f("%.1f", 1000.0 * v.npv_cost) + " = " + f("%.1f", 1000.0 * v.delta_ev));
  o += "  VD " + f("%.2f", v.vd.multiple) + "x (" + aitg::to_string(v.vd.tier) + ")\n";
  return o;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Firm AI transformation gap scoring and valuation engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  const char* env = std::getenv("AITG_WORKSPACE");
  g.workspace = env ? env : AITG_DEFAULT_WORKSPACE;
  app.add_option("--workspace,-w", g.workspace, "Workspace directory or archive file");
  app.add_option("--format,-f", g.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--run,-r", g.run, "Run configuration name");
  app.add_option("--seed", g.seed, "Seed for stochastic commands");
  app.add_option("--workers", g.workers, "Worker threads (0 = hardware concurrency)");

  std::string firm_id;
  std::optional<double> t_hat;
  auto firm_cmd = [&](const char* name, const char* desc) {
    auto* c = app.add_subcommand(name, desc);
    c->add_option("firm", firm_id, "Firm id")->required();
    c->add_option("--t-hat", t_hat, "Supply the curve position (months) instead of inverting");
    return c;
  };
  auto* score = firm_cmd("score", "Full pipeline report for a firm");
  auto* curve = firm_cmd("curve", "Trajectory: implied position, t50 and curve samples");
  auto* vcb = firm_cmd("vcb", "Value creation bridge steps");
  auto* adri_c = firm_cmd("adri", "Disruption risk block");
  auto* mc = firm_cmd("mc", "Monte Carlo distribution of dEV");
  std::optional<std::size_t> draws;
  mc->add_option("--draws", draws, "Draw count (default from run)");
  auto* sobol = firm_cmd("sobol", "First-order Sobol indices of dEV");
  std::size_t sobol_draws = 50000;
  sobol->add_option("--draws", sobol_draws, "Base sample size");

  auto* afc = app.add_subcommand("afc", "AFC multiplier grid and adjusted ceilings");
  std::vector<double> thetas{0.08, 0.11, 0.14, 0.22, 0.28, 0.31, 0.50, 1.00};
  std::vector<double> cts{0.90, 1.00, 1.20, 1.50, 1.70, 1.90, 2.10};
  bool afc_industries = false;
  afc->add_option("--theta", thetas, "Sensitivity rows");
  afc->add_option("--ct", cts, "Capability index columns");
  afc->add_flag("--industries", afc_industries, "List IASS and IASS* for every industry at the run's C_t");

  auto* rank = app.add_subcommand("rankstab", "Rank stability of industry ceilings under weight perturbation");
  std::vector<std::string> rank_ids = kAnchorIndustries;
  double half_width = 0.05;
  std::size_t rank_draws = 10000;
  rank->add_option("--industries", rank_ids, "Industry ids");
  rank->add_option("--half-width", half_width, "Uniform half-width per weight");
  rank->add_option("--draws", rank_draws, "Draw count");

  auto* backtest = app.add_subcommand("backtest", "Spearman rank correlation on the bundled backtest");
  auto* validate = app.add_subcommand("validate", "Load and validate the workspace");
  std::string archive_out;
  validate->add_option("--archive", archive_out, "Write a single-file workspace archive");
  auto* survey = app.add_subcommand("survey", "Score a bundled survey submission");
  std::string survey_id;
  survey->add_option("id", survey_id, "Survey id")->required();

  auto* serve = app.add_subcommand("serve", "Run the JSON service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string report_dir;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--reports", report_dir, "Directory for the append-only report archive");

  CLI11_PARSE(app, argc, argv);

  const aitg::WorkspaceBundle ws = aitg::load_workspace(g.workspace);
  for (const auto& w : ws.warnings) std::cerr << "aitg: [input] warning: " << w << "\n";
  const aitg::RunConfig& run = ws.run(g.run);
  aitg::EvalOptions opt;
  opt.t_hat = t_hat;

  if (*score) {
    const auto r = aitg::evaluate_firm(ws, firm_id, run, opt);
    emit(g, aitg::report_to_json(r), aitg::report_table(r));
  } else if (*curve) {
    const auto r = aitg::evaluate_firm(ws, firm_id, run, opt);
    const auto& firm = ws.firm(firm_id);
    const auto c = aitg::build_firm_curve(run.waves, aitg::IfsTrajectoryFactors<double>{firm.ifs.occ, firm.ifs.dr},
                                          r.t50_base, run.afc_on_curve ? r.afc : 1.0, run.afc_exponents, run.k_ramp);
    Json pts = Json::array();
    for (int t = 0; t <= 120; t += 12)
      pts.push_back({{"t", t}, {"base", aitg::aitg_at<double>(t, c.base)}, {"firm", aitg::aitg_at<double>(t, c.adjusted)}});
    Json j = aitg::report_to_json(r)["trajectory"];
    j["firm"] = firm_id;
    j["curve_months"] = pts;
    emit(g, j, curve_table(r, c));
  } else if (*vcb) {
    const auto r = aitg::evaluate_firm(ws, firm_id, run, opt);
    Json j = aitg::report_to_json(r)["vcb"];
    j["firm"] = firm_id;
    emit(g, j, vcb_steps(r));
  } else if (*adri_c) {
    const auto r = aitg::evaluate_firm(ws, firm_id, run, opt);
    Json j = aitg::report_to_json(r)["adri"];
    j["firm"] = firm_id;
    j["horizon"] = aitg::quantity(run.hazard_horizon_months, "months");
    emit(g, j,
         r.firm_name + ": ADRI " + f("%.2f", r.adri) + " (" + aitg::to_string(r.adri_class) + "), hazard " +
             f("%.4f", r.hazard) + "/yr, P(displaced within " + f("%.0f", run.hazard_horizon_months) + " mo) " +
             f("%.4f", r.p_displacement) + ", moat " + f("%.3f", r.moat) + ", urgency " + f("%.3f", r.urgency) + "\n");
  } else if (*mc) {
    const auto& firm = ws.firm(firm_id);
    const auto m = aitg::run_monte_carlo(ws.industry(firm.industry), ws.pools, firm, run, draws.value_or(run.mc.draws),
                                         g.seed.value_or(run.mc.seed), workers_of(g), opt);
    emit(g, aitg::mc_to_json(m, firm_id), aitg::mc_table(m, firm_id));
  } else if (*sobol) {
    const auto& firm = ws.firm(firm_id);
    const auto seed = g.seed.value_or(run.mc.seed);
    const auto s = aitg::run_sobol(ws.industry(firm.industry), ws.pools, firm, run, sobol_draws, seed, workers_of(g), opt);
    std::string t = "First-order Sobol indices of dEV, " + firm_id + " (" + std::to_string(sobol_draws) + " draws)\n";
    for (std::size_t i = 0; i < s.names.size(); ++i) t += "  " + s.names[i] + std::string(16 - std::min<std::size_t>(15, s.names[i].size()), ' ') + f("%.3f", s.first_order[i]) + "\n";
    emit(g, aitg::sobol_to_json(s, firm_id, sobol_draws, seed), t);
  } else if (*afc) {
    if (afc_industries) {
      Json a = Json::array();
      std::string t = "industry                      theta   IASS    AFC     IASS*\n";
      for (const auto& i : ws.industries) {
        const double base = i.iass_base();
        const double m = aitg::compute_afc(i.theta, run.c_t, aitg::AfcConfig<double>{run.c_0, run.alpha_max});
        a.push_back({{"industry", i.id}, {"theta", i.theta}, {"iass", base}, {"afc", m}, {"iass_star", base * m}});
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-28s %6.2f  %5.2f  %6.3f  %6.2f\n", i.id.c_str(), i.theta, base, m, base * m);
        t += buf;
      }
      emit(g, Json{{"c_t", run.c_t}, {"industries", a}}, t);
    } else {
      Json rows = Json::array();
      std::string t = "theta \\ C_t";
      for (double c : cts) t += f("%9.2f", c);
      t += "\n";
      for (double th : thetas) {
        Json row = Json::array();
        t += f("%-11.2f", th);
        for (double c : cts) {
          const double raw = 1.0 + th * (c - run.c_0);
          const double v = aitg::compute_afc(th, c, aitg::AfcConfig<double>{run.c_0, run.alpha_max});
          const bool capped = raw > run.alpha_max;
          row.push_back({{"c_t", c}, {"afc", v}, {"capped", capped}});
          t += f("%8.3f", v) + (capped ? "+" : " ");
        }
        rows.push_back({{"theta", th}, {"cells", row}});
        t += "\n";
      }
      t += "(+ capped at alpha_max " + f("%.2f", run.alpha_max) + ")\n";
      emit(g, Json{{"alpha_max", run.alpha_max}, {"c_0", run.c_0}, {"rows", rows}}, t);
    }
  } else if (*rank) {
    std::vector<aitg::RankItem> items;
    for (const auto& id : rank_ids) {
      const auto& i = ws.industry(id);
      items.push_back({i.id, i.scores, i.psi});
    }
    const auto seed = g.seed.value_or(run.mc.seed);
    const auto r = aitg::weight_perturbation_rank_stability(items, aitg::default_industry_weights<double>(), half_width,
                                                            rank_draws, seed, workers_of(g));
    std::string t = "Rank stability, +-" + f("%.3f", half_width) + " per weight, " + std::to_string(rank_draws) + " draws\n";
    for (std::size_t i = 0; i < r.ids.size(); ++i)
      t += "  " + r.ids[i] + std::string(24 - std::min<std::size_t>(23, r.ids[i].size()), ' ') + "base " +
           f("%.0f", r.base_rank(static_cast<Eigen::Index>(i))) + "  mean " + f("%.3f", r.mean_rank(static_cast<Eigen::Index>(i))) + "\n";
    t += "  mean |shift| " + f("%.3f", r.mean_abs_shift) + ", swap events " + std::to_string(r.total_swap_events) + "\n";
    emit(g, aitg::rank_stability_to_json(r, half_width, rank_draws, seed), t);
  } else if (*backtest) {
    if (!ws.backtest) throw aitg::Error("input", "workspace has no backtest fixture", "backtest.json");
    const auto& b = *ws.backtest;
    const double rho = aitg::spearman(b.aitg, b.delta_margin_pp);
    emit(g, Json{{"n", b.firms.size()}, {"spearman", rho}, {"firms", b.firms}},
         "Spearman rank correlation, " + std::to_string(b.firms.size()) + " firms: " + f("%.3f", rho) + "\n");
  } else if (*validate) {
    if (!archive_out.empty()) aitg::save_archive(ws, archive_out);
    Json j{{"schema_version", ws.schema_version},
           {"industries", ws.industries.size()},
           {"pools", ws.pools.size()},
           {"firms", ws.firms.size()},
           {"runs", ws.runs.size()},
           {"surveys", ws.surveys.size()},
           {"warnings", ws.warnings}};
    emit(g, j,
         "workspace OK: " + std::to_string(ws.industries.size()) + " industries, " + std::to_string(ws.pools.size()) +
             " pools, " + std::to_string(ws.firms.size()) + " firms, " + std::to_string(ws.runs.size()) + " runs, " +
             std::to_string(ws.surveys.size()) + " surveys, " + std::to_string(ws.warnings.size()) + " warnings\n");
  } else if (*survey) {
    const auto& s = ws.survey(survey_id);
    const auto r = aitg::score_survey(s.response);
    std::string t = "Survey " + survey_id + "\n";
    for (std::size_t d = 0; d < 6; ++d)
      t += "  " + std::string(aitg::kFirmDimNames[d]) + "  " + f("%.2f", r.dims.scores(static_cast<Eigen::Index>(d))) +
           "  tier " + aitg::to_string(r.dims.tiers[d]) + (r.capped[d] ? "  (capped)" : "") + "\n";
    t += "  AITG " + f("%.2f", aitg::aitg_raw(r.dims.scores)) + "\n";
    emit(g, aitg::survey_result_to_json(r), t);
  } else if (*serve) {
    aitg::Service svc(ws, report_dir, g.workers);
    std::cerr << "aitg: serving on " << host << ":" << port << "\n";
    if (!svc.listen(host, port)) throw aitg::Error("serve", "cannot bind " + host + ":" + std::to_string(port));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const aitg::Error& e) {
    std::cerr << "aitg: [" << e.stage() << "] " << e.detail();
    if (!e.path().empty()) std::cerr << " (at " << e.path() << ")";
    std::cerr << "\n";
    return e.stage() == "input" ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "aitg: [internal] " << e.what() << "\n";
    return 1;
  }
}
