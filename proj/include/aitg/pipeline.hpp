#pragma once

#include "aitg/adri.hpp"
#include "aitg/calibration.hpp"
#include "aitg/frontier.hpp"
#include "aitg/scorecard.hpp"
#include "aitg/sensitivity.hpp"
#include "aitg/trajectory.hpp"
#include "aitg/vcb.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aitg {

inline constexpr const char* kEngineVersion = "1.0.0";

struct FirmFinancials {
  double revenue = 0.0;  // billions
  double wacc = 0.09;
  std::optional<double> exit_multiple;  // falls back to the industry default
  std::optional<double> s_star;         // falls back to the industry threshold
  bool vendor_only = false;
  std::optional<double> impl_cost;      // total, billions
  std::vector<CostYear<double>> cost_streams;
};

struct FirmProfile {
  std::string id;
  std::string name;
  std::string industry;
  FirmDimensionScores dims;
  IfsFactors<double> ifs;
  FirmFinancials financials;
  MoatFactors<double> moat;
  std::optional<double> uq_model;
  std::optional<double> uq_interrater;
  std::map<std::string, double> uplift_overrides;  // pool name -> uplift fraction
  std::map<std::string, double> published;         // reference values carried for comparison
  std::vector<std::string> synthetic_fields;
};

void validate_firm(const FirmProfile& f, const std::string& path);

enum class T50Mode { Constant, Variable };
enum class InversionCurve { Base, Firm };

struct McSettings {
  std::size_t draws = 10000;
  std::uint64_t seed = 20250101;
  DistributionSpec exit_multiple{DistKind::UniformAdditive, 2.0, 0.0, 0.5};
  DistributionSpec capture{DistKind::UniformMultiplier, 0.75, 1.25};
  DistributionSpec cost{DistKind::LognormalMultiplier, 0.30, 0.0};
  DistributionSpec gap{DistKind::NormalAdditive, 0.5};
  DistributionSpec ifs{DistKind::NormalAdditive, 0.08};
};

struct RunConfig {
  std::string id = "default";
  double c_t = 1.90;
  double c_0 = 1.0;
  double alpha_max = 1.35;
  T50Mode t50_mode = T50Mode::Constant;
  double t50_constant = 18.0;
  InversionCurve inversion_curve = InversionCurve::Base;
  bool afc_on_curve = false;
  WaveParams<double> waves;
  AfcFirmExponents<double> afc_exponents;
  double hold_months = 60.0;
  double k_ramp = 0.18;
  double capture_lambda = 3.5;
  double ces_rho = 5.0;
  double ces_floor = 0.01;
  double scale_alpha = 2.0;
  double vendor_cap = 0.65;
  double cost_rate = 0.012;
  int cost_years = 5;
  int fcf_years = 5;
  double adri_normalization = 20.25;
  double hazard_scale = 100.0;
  double hazard_horizon_months = 24.0;
  double uq_model = 0.25;
  double uq_interrater = 0.20;
  ScenarioSet<double> scenarios;
  McSettings mc;
};

// Perturbations used by the Monte Carlo layer; identity by default.
struct Perturbation {
  std::optional<double> exit_multiple;
  double capture_mult = 1.0;
  double cost_mult = 1.0;
  double gap_shift = 0.0;  // added to the observed composite score
  double ifs_shift = 0.0;  // added to the residual multiplier
};

struct EvalOptions {
  std::optional<double> t_hat;  // supplied curve position, months
  Perturbation perturbation;
};

struct PoolResult {
  std::string name;
  double uplift = 0.0;
  double kappa = 0.0;
  double b = 0.0;
  double capture_raw = 0.0;
  double capture = 0.0;
  double value = 0.0;  // billions per year
};

struct VcbBreakdown {
  double phi = 0.0;
  double eta = 0.0;
  std::vector<PoolResult> pools;
  double capture_sum_raw = 0.0;
  bool rescaled = false;
  double pool_sum = 0.0;
  double r0 = 0.0;
  double r_end = 0.0;
  double delta_r = 0.0;
  double ifs_resid = 0.0;
  double exit_multiple = 0.0;
  double tv = 0.0;
  double fcf = 0.0;
  double npv_cost = 0.0;
  double delta_ev = 0.0;
  double impl_cost = 0.0;
  std::string cost_basis;
  ValueDensity vd{0.0, VdTier::Tier3};
};

struct PipelineReport {
  std::string firm_id;
  std::string firm_name;
  std::string industry_id;
  std::string run_id;

  double psi = 1.0;
  double theta = 0.0;
  double c_t = 0.0;
  double iass_base = 0.0;
  double afc = 1.0;
  double iass_star = 0.0;

  double aitg = 0.0;
  double ir = 0.0;
  double g_eff = 0.0;
  std::array<Tier, 6> tiers{};
  UncertaintyComponents uq_components;
  double uq = 0.0;
  std::string scorecard_line;
  bool frontier_exceeded = false;

  double t_hat = 0.0;
  std::string t_hat_source;
  double t50_base = 0.0;
  double t50 = 0.0;
  double k_multiplier = 1.0;
  double delay = 1.0;
  int wave_zone = 1;

  VcbBreakdown vcb;

  double moat = 0.0;
  double urgency = 1.0;
  double adri = 0.0;
  double hazard = 0.0;
  double p_displacement = 0.0;
  AdriClass adri_class = AdriClass::Low;

  std::vector<std::string> notes;
  std::string input_digest;
  std::string inputs;  // canonical JSON of the recorded inputs, when known
  std::string engine_version = kEngineVersion;
};

PipelineReport evaluate(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                        const FirmProfile& firm, const RunConfig& run, const EvalOptions& opt = {});

// Monte Carlo input order: exit multiple, capture, cost, gap, IFS.
std::vector<McInputSpec> mc_inputs(const IndustryCalibration& industry, const FirmProfile& firm,
                                   const RunConfig& run);
Perturbation perturbation_from(const VecXd& x);

struct McReport {
  McSummary summary;
  double base_delta_ev = 0.0;
  double impl_cost = 0.0;
  double vd_p50 = 0.0;
  ActionSignal signal = ActionSignal::DoNotInvest;
};

McReport run_monte_carlo(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                         const FirmProfile& firm, const RunConfig& run, std::size_t draws,
                         std::uint64_t seed, unsigned workers = 1, const EvalOptions& opt = {});

SobolResult run_sobol(const IndustryCalibration& industry, const std::vector<ValuePoolSpec>& pools,
                      const FirmProfile& firm, const RunConfig& run, std::size_t draws,
                      std::uint64_t seed, unsigned workers = 1, const EvalOptions& opt = {});

}  // namespace aitg
