#pragma once

#include "aitg/types.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace aitg {

template <typename Scalar>
struct Wave {
  Scalar L;
  Scalar k;   // per month
  Scalar t0;  // months
};

template <typename Scalar>
struct WaveParams {
  std::array<Wave<Scalar>, 3> w{{{Scalar(4.0), Scalar(0.38), Scalar(18)},
                                 {Scalar(3.5), Scalar(0.42), Scalar(36)},
                                 {Scalar(2.5), Scalar(0.32), Scalar(60)}}};

  Scalar total() const { return w[0].L + w[1].L + w[2].L; }
};

// Base parameters must split the full 0-10 range across three ordered waves.
template <typename Scalar>
void validate_waves(const WaveParams<Scalar>& p, bool require_unit_total = true) {
  using std::abs;
  for (const auto& x : p.w)
    if (!(x.L > Scalar(0) && x.k > Scalar(0)))
      throw Error("trajectory", "wave ceilings and steepness must be positive");
  if (!(p.w[0].t0 < p.w[1].t0 && p.w[1].t0 < p.w[2].t0))
    throw Error("trajectory", "wave midpoints must be strictly increasing");
  if (require_unit_total && abs(p.total() - Scalar(10)) > Scalar(1e-9))
    throw Error("trajectory", "wave ceilings must sum to 10");
}

template <typename Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  return Scalar(1) / (Scalar(1) + exp(-x));
}

template <typename Scalar>
Scalar aitg_at(Scalar t, const WaveParams<Scalar>& p) {
  Scalar s(0);
  for (const auto& x : p.w) s += x.L * logistic(x.k * (t - x.t0));
  return s;
}

template <typename Scalar>
Scalar aitg_slope(Scalar t, const WaveParams<Scalar>& p) {
  Scalar d(0);
  for (const auto& x : p.w) {
    const Scalar g = logistic(x.k * (t - x.t0));
    d += x.L * x.k * g * (Scalar(1) - g);
  }
  return d;
}

enum class InverseMethod { ClosedFormWave1, ClosedFormWave2, Newton, Bisection };

inline const char* to_string(InverseMethod m) {
  switch (m) {
    case InverseMethod::ClosedFormWave1: return "closed-form-wave1";
    case InverseMethod::ClosedFormWave2: return "closed-form-wave2";
    case InverseMethod::Newton: return "newton";
    case InverseMethod::Bisection: return "bisection";
  }
  return "unknown";
}

template <typename Scalar>
struct InverseResult {
  Scalar t;
  InverseMethod method;
  int iterations;
};

template <typename Scalar>
struct InverseOptions {
  Scalar branch_epsilon = Scalar(0.01);
  Scalar tolerance = Scalar(1e-6);
  Scalar newton_start = Scalar(60);
  int newton_max_iter = 25;
  Scalar bracket_lo = Scalar(-200);
  Scalar bracket_hi = Scalar(600);
};

// Implied time at which the cascade reaches `score`. Closed forms are tried
// first and kept only if they pass the roundtrip tolerance; every logarithm
// argument is checked positive before evaluation.
template <typename Scalar>
InverseResult<Scalar> invert(Scalar score, const WaveParams<Scalar>& p,
                             const InverseOptions<Scalar>& opt = {}) {
  using std::abs;
  using std::isfinite;
  using std::log;
  const Scalar top = p.total();
  if (!(score > Scalar(0) && score < top))
    throw Error("trajectory", "score must lie strictly inside (0, " + std::to_string(double(top)) + ")");

  const auto& w1 = p.w[0];
  const auto& w2 = p.w[1];
  const Scalar eps = opt.branch_epsilon;
  Scalar guess = std::numeric_limits<Scalar>::quiet_NaN();
  InverseMethod closed = InverseMethod::Newton;
  if (score < w1.L - eps) {
    const Scalar arg = w1.L / score - Scalar(1);
    if (arg > Scalar(0)) {
      guess = w1.t0 - log(arg) / w1.k;
      closed = InverseMethod::ClosedFormWave1;
    }
  } else if (score > w1.L + eps && score < w1.L + w2.L - eps) {
    const Scalar arg = w2.L / (score - w1.L) - Scalar(1);
    if (arg > Scalar(0)) {
      guess = w2.t0 - log(arg) / w2.k;
      closed = InverseMethod::ClosedFormWave2;
    }
  }
  if (isfinite(guess) && abs(aitg_at(guess, p) - score) < opt.tolerance) return {guess, closed, 0};

  const Scalar newton_tol = opt.tolerance * Scalar(1e-3);
  Scalar t = isfinite(guess) ? guess : opt.newton_start;
  for (int i = 1; i <= opt.newton_max_iter; ++i) {
    const Scalar f = aitg_at(t, p) - score;
    const Scalar d = aitg_slope(t, p);
    if (!(d > Scalar(0)) || !isfinite(d)) break;
    const Scalar next = t - f / d;
    if (!isfinite(next) || next < opt.bracket_lo || next > opt.bracket_hi) break;
    t = next;
    if (abs(aitg_at(t, p) - score) < newton_tol) return {t, InverseMethod::Newton, i};
  }

  Scalar lo = opt.bracket_lo, hi = opt.bracket_hi;
  for (int grow = 0; aitg_at(lo, p) > score && grow < 60; ++grow) lo -= (hi - lo);
  for (int grow = 0; aitg_at(hi, p) < score && grow < 60; ++grow) hi += (hi - lo);
  int iter = 0;
  while (hi - lo > Scalar(1e-12) * (Scalar(1) + abs(lo) + abs(hi)) && iter < 400) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (aitg_at(mid, p) < score) lo = mid;
    else hi = mid;
    ++iter;
  }
  return {Scalar(0.5) * (lo + hi), InverseMethod::Bisection, iter};
}

template <typename Scalar>
struct IfsTrajectoryFactors {
  Scalar occ = Scalar(1);
  Scalar dr = Scalar(1);
};

inline constexpr double kDeltaFloor = 0.10;

template <typename Scalar>
void validate_trajectory_factors(const IfsTrajectoryFactors<Scalar>& f) {
  if (!(f.occ > Scalar(0) && f.occ <= Scalar(1) && f.dr > Scalar(0) && f.dr <= Scalar(1)))
    throw Error("trajectory", "trajectory factors must lie in (0, 1]");
}

template <typename Scalar>
Scalar steepness_multiplier(const IfsTrajectoryFactors<Scalar>& f) {
  return (Scalar(0.55) + Scalar(0.45) * f.occ) * (Scalar(0.50) + Scalar(0.50) * f.dr);
}

template <typename Scalar>
Scalar adjust_steepness(Scalar k_base, const IfsTrajectoryFactors<Scalar>& f) {
  validate_trajectory_factors(f);
  return k_base * steepness_multiplier(f);
}

template <typename Scalar>
Scalar adjust_t50(Scalar t50_base, const IfsTrajectoryFactors<Scalar>& f) {
  using std::max;
  using std::pow;
  if (!(t50_base > Scalar(0))) throw Error("trajectory", "t50 base must be positive");
  const Scalar floor(kDeltaFloor);
  return t50_base / (pow(max(f.occ, floor), Scalar(0.40)) * pow(max(f.dr, floor), Scalar(0.60)));
}

template <typename Scalar>
WaveParams<Scalar> shift_wave_midpoints(const WaveParams<Scalar>& p, Scalar delay_factor) {
  if (!(delay_factor > Scalar(0))) throw Error("trajectory", "delay factor must be positive");
  WaveParams<Scalar> out = p;
  for (auto& x : out.w) x.t0 *= delay_factor;
  return out;
}

template <typename Scalar>
struct AfcFirmExponents {
  std::array<Scalar, 3> phi{Scalar(0.25), Scalar(0.50), Scalar(1.00)};
  std::array<Scalar, 3> mu{Scalar(0.10), Scalar(0.20), Scalar(0.30)};
};

template <typename Scalar>
WaveParams<Scalar> afc_firm_adjust(const WaveParams<Scalar>& p, Scalar afc,
                                   const AfcFirmExponents<Scalar>& e = {}) {
  using std::pow;
  if (!(afc > Scalar(0))) throw Error("trajectory", "AFC must be positive");
  if (!(e.phi[2] > e.phi[1] && e.phi[1] > e.phi[0]))
    throw Error("trajectory", "ceiling exponents must be strictly increasing across waves");
  for (Scalar m : e.mu)
    if (!(m > Scalar(0))) throw Error("trajectory", "timing exponents must be positive");
  WaveParams<Scalar> out = p;
  for (std::size_t i = 0; i < 3; ++i) {
    out.w[i].L = p.w[i].L * pow(afc, e.phi[i]);
    out.w[i].t0 = p.w[i].t0 / pow(afc, e.mu[i]);
  }
  return out;
}

template <typename Scalar>
Scalar variable_t50_base(Scalar aitg_raw) {
  if (!(aitg_raw >= Scalar(0) && aitg_raw <= Scalar(10)))
    throw Error("trajectory", "score outside [0, 10]");
  return Scalar(18) + aitg_raw / Scalar(10) * Scalar(42);
}

template <typename Scalar>
struct FirmCurve {
  WaveParams<Scalar> base;
  WaveParams<Scalar> adjusted;
  Scalar t50_base = Scalar(18);
  Scalar t50 = Scalar(18);
  Scalar k_ramp = Scalar(0.18);
  Scalar delay() const { return t50 / t50_base; }
};

// Firm curve: steepness scaled by the IFS multipliers, midpoints delayed by the
// t50 ratio, then (optionally) the AFC ceiling/timing shift.
template <typename Scalar>
FirmCurve<Scalar> build_firm_curve(const WaveParams<Scalar>& base,
                                   const IfsTrajectoryFactors<Scalar>& f, Scalar t50_base,
                                   Scalar afc = Scalar(1), const AfcFirmExponents<Scalar>& e = {},
                                   Scalar k_ramp = Scalar(0.18)) {
  validate_waves(base);
  FirmCurve<Scalar> c;
  c.base = base;
  c.t50_base = t50_base;
  c.t50 = adjust_t50(t50_base, f);
  c.k_ramp = k_ramp;
  WaveParams<Scalar> adj = base;
  for (auto& x : adj.w) x.k = adjust_steepness(x.k, f);
  adj = shift_wave_midpoints(adj, c.delay());
  if (afc != Scalar(1)) adj = afc_firm_adjust(adj, afc, e);
  c.adjusted = adj;
  return c;
}

// Which wave dominates the marginal slope at time t (1-based).
template <typename Scalar>
int wave_zone(Scalar t, const WaveParams<Scalar>& p) {
  int best = 0;
  Scalar best_v(-1);
  for (int i = 0; i < 3; ++i) {
    const Scalar g = logistic(p.w[i].k * (t - p.w[i].t0));
    const Scalar v = p.w[i].L * p.w[i].k * g * (Scalar(1) - g);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best + 1;
}

}  // namespace aitg
