#include "tollgap/model.hpp"

#include <algorithm>
#include <cmath>

namespace tollgap {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void validate(const BottleneckParams& p) {
  require(std::isfinite(p.total_demand) && p.total_demand > 0, "total_demand must be positive");
  require(std::isfinite(p.arrival_rate) && p.arrival_rate > 0, "arrival_rate must be positive");
  require(std::isfinite(p.capacity) && p.capacity > 0, "capacity must be positive");
  require(p.early_penalty > 0 && p.early_penalty < 1, "early_penalty must lie in (0, 1)");
  require(std::isfinite(p.late_penalty) && p.late_penalty > 0, "late_penalty must be positive");
  require(std::isfinite(p.car_cost) && p.car_cost >= 0, "car_cost must be nonnegative");
  require(std::isfinite(p.transit_cost) && p.transit_cost >= 0,
          "transit_cost must be nonnegative");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::AllTransit: return "all_transit";
    case Regime::Uncongested: return "uncongested";
    case Regime::MixedLow: return "mixed_low";
    case Regime::MixedMid: return "mixed_mid";
    case Regime::MixedHigh: return "mixed_high";
  }
  return "unknown";
}

double mixed_low_threshold(const BottleneckParams& p) {
  return p.total_demand * p.penalty_mean() / (p.arrival_rate - p.capacity);
}

double mixed_high_threshold(const BottleneckParams& p) {
  return p.total_demand * p.penalty_mean() *
         (1.0 / (p.arrival_rate - p.capacity) + 2.0 / p.capacity);
}

Regime classify_regime(const BottleneckParams& p) {
  validate(p);
  if (p.transit_cost < p.car_cost) return Regime::AllTransit;
  if (p.capacity >= p.arrival_rate) return Regime::Uncongested;
  const double gap = p.cost_gap();
  if (gap <= mixed_low_threshold(p)) return Regime::MixedLow;
  if (gap > mixed_high_threshold(p)) return Regime::MixedHigh;
  return Regime::MixedMid;
}

RushWindow rush_window(const BottleneckParams& p) {
  return {0.0, p.total_demand / p.arrival_rate};
}

double TrapezoidToll::at(double t) const {
  double v = peak;
  if (t < t_b) {
    v = peak - rise_slope * (t_b - t);
  } else if (t > t_c) {
    v = peak - fall_slope * (t - t_c);
  }
  return std::max(v, 0.0);
}

double toll_at(const TollPolicy& policy, double t) {
  if (const auto* s = std::get_if<StaticToll>(&policy)) return s->level;
  return std::get<TrapezoidToll>(policy).at(t);
}

CostBreakdown make_breakdown(double transit, double car_freeflow, double queuing,
                             double schedule, double revenue) {
  CostBreakdown c;
  c.transit = transit;
  c.car_freeflow = car_freeflow;
  c.queuing = queuing;
  c.schedule = schedule;
  c.total = transit + car_freeflow + queuing + schedule;
  c.revenue = revenue;
  return c;
}

}  // namespace tollgap
