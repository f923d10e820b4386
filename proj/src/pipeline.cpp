#include "aitg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace aitg {

void validate_firm(const FirmProfile& f, const std::string& path) {
  if (f.id.empty()) throw Error("input", "firm id is empty", path + ".id");
  if (f.industry.empty()) throw Error("input", "firm industry is empty", path + ".industry");
  validate_dimension_scores(f.dims, path + ".scores");
  const std::array<std::pair<const char*, double>, 5> deltas{
      {{"occ", f.ifs.occ}, {"dr", f.ifs.dr}, {"vtr", f.ifs.vtr}, {"crs", f.ifs.crs}, {"reg", f.ifs.reg}}};
  for (const auto& [name, v] : deltas)
    if (!(v > 0.0 && v <= 1.0))
      throw Error("input", "IFS factor must lie in (0, 1]", path + ".ifs." + name);
  const auto& fin = f.financials;
  if (!(fin.revenue > 0.0)) throw Error("input", "revenue must be positive", path + ".financials.revenue");
  if (!(fin.wacc > -1.0)) throw Error("input", "WACC must exceed -1", path + ".financials.wacc");
  if (fin.exit_multiple && *fin.exit_multiple < 0.0)
    throw Error("input", "exit multiple must be nonnegative", path + ".financials.exit_multiple");
  if (fin.s_star && !(*fin.s_star > 0.0))
    throw Error("input", "s_star must be positive", path + ".financials.s_star");
  if (fin.impl_cost && !(*fin.impl_cost > 0.0))
    throw Error("input", "implementation cost must be positive", path + ".financials.impl_cost");
  if ((f.moat.scores.array() < 0.0).any() || (f.moat.scores.array() > 1.0).any())
    throw Error("input", "moat factors must lie in [0, 1]", path + ".moat");
  for (const auto& [pool, u] : f.uplift_overrides)
    if (!(u >= 0.0)) throw Error("input", "uplift must be nonnegative", path + ".pool_overrides." + pool);
}

namespace {

struct CostPlan {
  std::vector<CostYear<double>> streams;
  double total = 0.0;
  std::string basis;
};

CostPlan cost_plan(const FirmProfile& firm, const RunConfig& run) {
  CostPlan c;
  const auto& fin = firm.financials;
  if (!fin.cost_streams.empty()) {
    c.streams = fin.cost_streams;
    for (const auto& y : c.streams) c.total += y.capex + y.opex;
    c.basis = "explicit cost streams";
    return c;
  }
  char buf[96];
  if (fin.impl_cost) {
    c.total = *fin.impl_cost;
    std::snprintf(buf, sizeof buf, "stated total spread evenly over %d years", run.cost_years);
  } else {
    c.total = run.cost_rate * fin.revenue;
    std::snprintf(buf, sizeof buf, "%.2f%% of revenue spread evenly over %d years",
                  100.0 * run.cost_rate, run.cost_years);
  }
  c.basis = buf;
  const int years = std::max(1, run.cost_years);
  c.streams.assign(static_cast<std::size_t>(years), CostYear<double>{0.0, c.total / years});
  return c;
}

template <typename Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.stage() == stage) throw;
    throw Error(stage, e.what(), e.path());
  }
}

}  // namespace

PipelineReport evaluate(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                        const FirmProfile& firm, const RunConfig& run, const EvalOptions& opt) {
  const Perturbation& pert = opt.perturbation;
  PipelineReport r;
  r.firm_id = firm.id;
  r.firm_name = firm.name;
  r.industry_id = industry.id;
  r.run_id = run.id;

  // Industry ceiling and frontier adjustment.
  r.psi = industry.psi;
  r.theta = industry.theta;
  r.c_t = run.c_t;
  r.iass_base = staged("calibration", [&] { return industry.iass_base(); });
  staged("frontier", [&] {
    r.afc = compute_afc(industry.theta, run.c_t, AfcConfig<double>{run.c_0, run.alpha_max});
    r.iass_star = adjusted_ceiling(r.iass_base, r.afc);
    return 0;
  });

  // Firm scorecard.
  staged("scorecard", [&] {
    const double observed = aitg_raw(firm.dims.scores);
    r.aitg = std::clamp(observed + pert.gap_shift, 0.0, 10.0);
    const auto ig = ir_and_gap(r.aitg, r.iass_star);
    r.ir = ig.ir;
    r.g_eff = ig.g_eff;
    r.frontier_exceeded = r.aitg > r.iass_star;
    r.tiers = firm.dims.tiers;
    r.uq_components.data_tier = data_tier_component(firm.dims.tiers);
    r.uq_components.model = firm.uq_model.value_or(run.uq_model);
    r.uq_components.afc = scenario_uq(run.scenarios) * r.iass_base;
    r.uq_components.interrater = firm.uq_interrater.value_or(run.uq_interrater);
    r.uq = aggregate_uq(r.uq_components);
    r.scorecard_line = scorecard_line(r.aitg, r.ir, r.g_eff, r.uq);
    return 0;
  });
  if (r.frontier_exceeded) r.notes.push_back("frontier exceeded: composite score above adjusted ceiling");

  // Trajectory: firm curve, implied position, value-ramp midpoint.
  FirmCurve<double> curve = staged("trajectory", [&] {
    const IfsTrajectoryFactors<double> tf{firm.ifs.occ, firm.ifs.dr};
    r.t50_base = run.t50_mode == T50Mode::Constant ? run.t50_constant : variable_t50_base(r.aitg);
    const double afc_curve = run.afc_on_curve ? r.afc : 1.0;
    auto c = build_firm_curve(run.waves, tf, r.t50_base, afc_curve, run.afc_exponents, run.k_ramp);
    r.t50 = c.t50;
    r.delay = c.delay();
    r.k_multiplier = steepness_multiplier(tf);
    return c;
  });
  const WaveParams<double>& inv_curve =
      run.inversion_curve == InversionCurve::Base ? curve.base : curve.adjusted;
  staged("trajectory", [&] {
    if (opt.t_hat) {
      r.t_hat = *opt.t_hat;
      r.t_hat_source = "supplied";
    } else {
      const double top = inv_curve.total();
      const double s = std::clamp(r.aitg, 1e-6 * top, top * (1.0 - 1e-6));
      const auto inv = invert(s, inv_curve);
      r.t_hat = inv.t;
      r.t_hat_source = std::string("inverted (") + to_string(inv.method) + ", " +
                       (run.inversion_curve == InversionCurve::Base ? "base curve" : "firm curve") + ")";
    }
    r.wave_zone = wave_zone(r.t_hat, inv_curve);
    return 0;
  });
  if (firm.ifs.occ < kDeltaRanges[0].lo || firm.ifs.dr < kDeltaRanges[1].lo)
    r.notes.push_back("trajectory factor below the declared [0.50, 1.00] entry range");

  // Value creation bridge.
  staged("vcb", [&] {
    auto& v = r.vcb;
    const auto& fin = firm.financials;
    const double s_star = fin.s_star.value_or(industry.s_star);
    v.phi = firm_scale(fin.revenue, s_star, run.scale_alpha, fin.vendor_only, run.vendor_cap);
    v.eta = gap_fraction(r.g_eff, run.capture_lambda);
    const CesConfig<double> ces{run.ces_rho, run.ces_floor};
    VecXd raw(static_cast<Eigen::Index>(pools.size()));
    for (std::size_t p = 0; p < pools.size(); ++p) {
      const auto& spec = pools[p];
      PoolResult pr;
      pr.name = spec.name;
      const auto ov = firm.uplift_overrides.find(spec.name);
      pr.uplift = ov != firm.uplift_overrides.end() ? ov->second : spec.uplift;
      pr.kappa = spec.kappa;
      VecXd e(static_cast<Eigen::Index>(spec.dims.size()));
      for (std::size_t d = 0; d < spec.dims.size(); ++d)
        e(static_cast<Eigen::Index>(d)) = firm.dims.scores(index_of(spec.dims[d])) / 10.0;
      const VecXd alpha = spec.alpha.size() ? spec.alpha : equal_weights<double>(e.size());
      pr.b = ces_bottleneck(e, alpha, ces);
      pr.capture_raw = capture(r.g_eff, pr.kappa, pr.b, run.capture_lambda);
      raw(static_cast<Eigen::Index>(p)) = pr.capture_raw;
      v.pools.push_back(pr);
    }
    v.capture_sum_raw = raw.sum();
    const VecXd scaled = rescale_captures(raw);
    v.rescaled = v.capture_sum_raw > 1.0;
    v.pool_sum = 0.0;
    for (std::size_t p = 0; p < v.pools.size(); ++p) {
      auto& pr = v.pools[p];
      pr.capture = scaled(static_cast<Eigen::Index>(p)) * pert.capture_mult;
      pr.value = pool_value(fin.revenue, pr.uplift, v.phi, pr.capture);
      v.pool_sum += pr.value;
    }

    v.r0 = ramp(r.t_hat, r.t50, run.k_ramp);
    v.r_end = ramp(r.t_hat + run.hold_months, r.t50, run.k_ramp);
    v.delta_r = delta_r(r.t_hat, r.t50, run.hold_months, run.k_ramp);
    v.ifs_resid = std::max(0.0, ifs_residual(firm.ifs) + pert.ifs_shift);
    v.exit_multiple =
        pert.exit_multiple.value_or(fin.exit_multiple.value_or(industry.exit_multiple));
    v.tv = terminal_value(v.pool_sum, v.delta_r, v.exit_multiple, v.ifs_resid);
    v.fcf = fcf_interim(v.pool_sum, r.t_hat, r.t50, v.ifs_resid, fin.wacc, run.k_ramp, run.fcf_years);

    CostPlan cp = cost_plan(firm, run);
    for (auto& y : cp.streams) {
      y.capex *= pert.cost_mult;
      y.opex *= pert.cost_mult;
    }
    v.npv_cost = npv_cost(cp.streams, fin.wacc);
    v.delta_ev = delta_ev(v.tv, v.fcf, v.npv_cost);
    v.impl_cost = cp.total;
    v.cost_basis = cp.basis;
    v.vd = value_density(v.delta_ev, v.impl_cost);
    return 0;
  });
  if (r.vcb.rescaled) r.notes.push_back("pool captures summed above 1 and were rescaled");

  // Disruption risk.
  staged("adri", [&] {
    const AdriConfig<double> ac{run.adri_normalization, run.hazard_scale};
    r.moat = moat(firm.moat);
    r.urgency = urgency_delta(run.c_t, run.c_0);
    r.adri = adri(r.g_eff, industry.cadr(), r.moat, r.urgency, ac);
    r.hazard = hazard(r.adri, ac);
    r.p_displacement = cumulative_displacement(r.adri, run.hazard_horizon_months, ac);
    r.adri_class = classify(r.adri);
    return 0;
  });
  return r;
}

std::vector<McInputSpec> mc_inputs(const IndustryCalibration& industry, const FirmProfile& firm,
                                   const RunConfig& run) {
  const double m = firm.financials.exit_multiple.value_or(industry.exit_multiple);
  return {{"exit_multiple", m, run.mc.exit_multiple},
          {"capture", 1.0, run.mc.capture},
          {"cost", 1.0, run.mc.cost},
          {"gap", 0.0, run.mc.gap},
          {"ifs", 0.0, run.mc.ifs}};
}

Perturbation perturbation_from(const VecXd& x) {
  Perturbation p;
  p.exit_multiple = x(0);
  p.capture_mult = x(1);
  p.cost_mult = x(2);
  p.gap_shift = x(3);
  p.ifs_shift = x(4);
  return p;
}

namespace {

McModel delta_ev_model(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                       const FirmProfile& firm, const RunConfig& run, const EvalOptions& opt) {
  return [&industry, &pools, &firm, &run, opt](const VecXd& x) {
    EvalOptions o = opt;
    o.perturbation = perturbation_from(x);
    return evaluate(industry, pools, firm, run, o).vcb.delta_ev;
  };
}

}  // namespace

McReport run_monte_carlo(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                         const FirmProfile& firm, const RunConfig& run, std::size_t draws,
                         std::uint64_t seed, unsigned workers, const EvalOptions& opt) {
  McReport out;
  const PipelineReport base = evaluate(industry, pools, firm, run, opt);
  out.base_delta_ev = base.vcb.delta_ev;
  out.impl_cost = base.vcb.impl_cost;
  McConfig cfg;
  cfg.draws = draws;
  cfg.seed = seed;
  cfg.workers = workers;
  out.summary = monte_carlo(delta_ev_model(industry, pools, firm, run, opt),
                            mc_inputs(industry, firm, run), cfg);
  out.vd_p50 = out.summary.at(50.0) / out.impl_cost;
  out.signal = action_signal(out.summary.at(10.0), out.summary.at(50.0), out.vd_p50);
  return out;
}

SobolResult run_sobol(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                      const FirmProfile& firm, const RunConfig& run, std::size_t draws,
                      std::uint64_t seed, unsigned workers, const EvalOptions& opt) {
  return sobol_first_order(delta_ev_model(industry, pools, firm, run, opt),
                           mc_inputs(industry, firm, run), draws, seed, workers);
}

}  // namespace aitg
