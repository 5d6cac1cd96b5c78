#include "tollgap/bottleneck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tollgap {

namespace {

void require_toll(double tau) {
  if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("toll must be finite and nonnegative");
}

void require_mixed(const BottleneckParams& p, const char* op) {
  validate(p);
  if (p.capacity >= p.arrival_rate)
    throw DomainError(std::string(op) + " needs capacity below the arrival rate");
  if (p.transit_cost < p.car_cost)
    throw DomainError(std::string(op) + " needs transit_cost >= car_cost");
}

// (e+L)/(eL)
double penalty_sum_ratio(const BottleneckParams& p) { return 1.0 / p.penalty_mean(); }

}  // namespace

double max_wait_car_only(const BottleneckParams& p) {
  validate(p);
  if (p.capacity >= p.arrival_rate) return 0.0;
  return p.total_demand * p.penalty_mean() / p.capacity;
}

EquilibriumOutcome static_equilibrium(const BottleneckParams& p, double tau) {
  require_toll(tau);
  EquilibriumOutcome out;
  out.regime = classify_regime(p);
  const RushWindow rush = rush_window(p);
  const double gap = p.cost_gap();

  if (out.regime == Regime::AllTransit || tau > gap) {
    out.n_transit = p.total_demand;
    return out;
  }
  if (out.regime == Regime::Uncongested) {
    out.n_ontime_car = p.total_demand;
    out.t_a = out.t_b = rush.t1;
    out.t_c = out.t_d = rush.t2;
    return out;
  }

  const double mu = p.capacity;
  const double r = p.capacity_ratio();
  const double tc = max_wait_car_only(p);
  const double w = std::clamp(gap - tau, 0.0, tc);
  const double share = 1.0 - w / tc;

  out.peak_wait = w;
  out.n_early = mu * w / p.early_penalty;
  out.n_late = mu * w / p.late_penalty;
  out.n_ontime_car = share * p.total_demand * r;
  out.n_transit = share * p.total_demand * (1.0 - r);

  out.t_b = rush.t1 + out.n_early / p.arrival_rate;
  out.t_a = out.t_b - w / p.early_penalty;
  out.t_c = rush.t2 - out.n_late / p.arrival_rate;
  out.t_d = out.t_c + w / p.late_penalty;
  return out;
}

double static_revenue(const BottleneckParams& p, double tau) {
  require_toll(tau);
  const Regime regime = classify_regime(p);
  const double gap = p.cost_gap();
  if (regime == Regime::AllTransit || tau > gap) return 0.0;
  if (regime == Regime::Uncongested) return tau * p.total_demand;

  const double lower = gap - max_wait_car_only(p);
  if (tau < lower) return tau * p.total_demand;
  const double r = p.capacity_ratio();
  return p.capacity * tau *
         (p.total_demand / p.arrival_rate + (gap - tau) * penalty_sum_ratio(p) * (1.0 - r));
}

TollValue static_revenue_optimal_toll(const BottleneckParams& p) {
  const Regime regime = classify_regime(p);
  const double gap = p.cost_gap();
  double tau = 0.0;
  switch (regime) {
    case Regime::AllTransit:
      return {0.0, 0.0};
    case Regime::Uncongested:
      return {gap, gap * p.total_demand};
    case Regime::MixedLow:
      tau = gap;
      break;
    case Regime::MixedMid:
    case Regime::MixedHigh:
      tau = std::max(gap / 2.0 + mixed_low_threshold(p) / 2.0, gap - max_wait_car_only(p));
      break;
  }
  return {tau, static_revenue(p, tau)};
}

double min_flat_fraction(const BottleneckParams& p) {
  require_mixed(p, "min_flat_fraction");
  return 1.0 - std::min(p.cost_gap() / max_wait_car_only(p), 1.0);
}

double dynamic_revenue_at_fraction(const BottleneckParams& p, double f) {
  require_mixed(p, "dynamic_revenue_at_fraction");
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("flat fraction must lie in [0, 1]");
  const double lam = p.total_demand;
  const double r = p.capacity_ratio();
  const double g = 1.0 - f;
  return p.cost_gap() * (f * lam * r + g * lam) -
         lam * lam / (2.0 * p.capacity) * p.penalty_mean() * g * g;
}

TrapezoidToll trapezoid_for_fraction(const BottleneckParams& p, double f) {
  require_mixed(p, "trapezoid_for_fraction");
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("flat fraction must lie in [0, 1]");
  const double e = p.early_penalty;
  const double l = p.late_penalty;
  const double ramp_users = (1.0 - f) * p.total_demand;
  const double n_early = l / (e + l) * ramp_users;
  const double n_late = e / (e + l) * ramp_users;

  TrapezoidToll t;
  t.peak = p.cost_gap();
  t.rise_slope = e;
  t.fall_slope = l;
  t.t_b = rush_window(p).t1 + n_early / p.arrival_rate;
  t.t_a = t.t_b - n_early / p.capacity;
  t.t_c = t.t_b + f * p.total_demand / p.arrival_rate;
  t.t_d = t.t_c + n_late / p.capacity;
  return t;
}

DynamicTollDesign dynamic_revenue_optimal(const BottleneckParams& p) {
  require_mixed(p, "dynamic_revenue_optimal");
  const double gap = p.cost_gap();
  const double lam = p.total_demand;
  const double mu = p.capacity;
  const double r = p.capacity_ratio();

  double f = std::max(1.0 - gap * mu / (lam * p.penalty_mean()) * (1.0 - r), 0.0);
  f = std::clamp(f, min_flat_fraction(p), 1.0);

  DynamicTollDesign d;
  d.flat_fraction = f;
  d.policy = trapezoid_for_fraction(p, f);
  if (gap <= mixed_low_threshold(p) / r) {
    d.revenue = gap * lam * r + gap * gap * mu / (2.0 * p.penalty_mean()) * (1.0 - r) * (1.0 - r);
  } else {
    d.revenue = gap * lam - lam * lam * p.penalty_mean() / (2.0 * mu);
  }
  return d;
}

DynamicTollDesign dynamic_so_design(const BottleneckParams& p) {
  DynamicTollDesign d;
  d.flat_fraction = min_flat_fraction(p);
  d.policy = trapezoid_for_fraction(p, d.flat_fraction);
  d.revenue = dynamic_revenue_at_fraction(p, d.flat_fraction);
  return d;
}

CostBreakdown static_system_cost(const BottleneckParams& p, double tau) {
  const EquilibriumOutcome eq = static_equilibrium(p, tau);
  const double revenue = static_revenue(p, tau);
  const double transit = p.transit_cost * eq.n_transit;
  const double car = p.car_cost * eq.car_users();
  if (eq.peak_wait == 0.0) return make_breakdown(transit, car, 0.0, 0.0, revenue);

  const double w = eq.peak_wait;
  const double ramp = p.capacity * w * w / 2.0 * penalty_sum_ratio(p);
  const double schedule = ramp * (1.0 - p.capacity_ratio());
  const double queuing = w * eq.n_ontime_car + ramp;
  return make_breakdown(transit, car, queuing, schedule, revenue);
}

CostBreakdown dynamic_ro_system_cost(const BottleneckParams& p) {
  const DynamicTollDesign d = dynamic_revenue_optimal(p);
  const double f = d.flat_fraction;
  const double lam = p.total_demand;
  const double r = p.capacity_ratio();
  const double transit = p.transit_cost * f * lam * (1.0 - r);
  const double car = p.car_cost * (f * lam * r + (1.0 - f) * lam);
  const double schedule = lam * lam * p.penalty_mean() / (2.0 * p.capacity) * (1.0 - f) *
                          (1.0 - f) * (1.0 - r);
  return make_breakdown(transit, car, 0.0, schedule, d.revenue);
}

double optimal_system_cost(const BottleneckParams& p) {
  validate(p);
  const double lam = p.total_demand;
  if (p.transit_cost <= p.car_cost) return p.transit_cost * lam;
  if (p.capacity >= p.arrival_rate) return p.car_cost * lam;

  const double gap = p.cost_gap();
  const double r = p.capacity_ratio();
  if (gap <= max_wait_car_only(p)) {
    return p.car_cost * lam + (1.0 - r) * lam * gap -
           (1.0 - r) * p.capacity / (2.0 * p.penalty_mean()) * gap * gap;
  }
  return p.car_cost * lam +
         p.penalty_mean() / 2.0 * lam * lam * (1.0 / p.capacity - 1.0 / p.arrival_rate);
}

TollValue static_sc_optimal_toll(const BottleneckParams& p) {
  const Regime regime = classify_regime(p);
  const double gap = p.cost_gap();
  if (regime == Regime::AllTransit) return {0.0, p.transit_cost * p.total_demand};
  if (regime == Regime::Uncongested) return {gap, static_system_cost(p, gap).total};

  const double lo = std::max(0.0, gap - max_wait_car_only(p));
  const double hi = gap;
  const double r = p.capacity_ratio();
  const double k = penalty_sum_ratio(p);

  std::array<double, 3> candidates{hi, lo, hi};
  if (r < 2.0 / 3.0) {
    const double mu = p.capacity;
    const double stationary = (p.total_demand * r - gap * mu * k * (2.0 * r - 1.0)) /
                              (mu * k * (2.0 - 3.0 * r));
    if (stationary > lo && stationary < hi) candidates[2] = stationary;
  }

  TollValue best{hi, static_system_cost(p, hi).total};
  for (double tau : candidates) {
    const double sc = static_system_cost(p, tau).total;
    if (sc < best.value) best = {tau, sc};
  }
  return best;
}

BoundReport theorem_bounds(const BottleneckParams& p) {
  require_mixed(p, "theorem_bounds");
  BoundReport b;
  b.regime = classify_regime(p);
  const double gap = p.cost_gap();
  const double r = p.capacity_ratio();
  const double low = mixed_low_threshold(p);

  b.s = gap > 0 ? low / gap : std::numeric_limits<double>::infinity();
  switch (b.regime) {
    case Regime::MixedLow:
      b.revenue_ratio_lower_bound = 2.0 / (3.0 - r);
      break;
    case Regime::MixedMid:
      b.revenue_ratio_lower_bound = std::min((2.0 + b.s) / 4.0, 1.0 / (2.0 * (1.0 - r)));
      break;
    default:
      b.revenue_ratio_lower_bound = 2.0 / 3.0;
      break;
  }
  if (gap <= max_wait_car_only(p)) b.sc_ratio_upper_bound = 2.0;
  if (p.car_cost == 0.0 && gap > low * (2.0 - r) / r) b.unbounded_ratio = 1.0 + 1.0 / (1.0 - r);
  return b;
}

}  // namespace tollgap
