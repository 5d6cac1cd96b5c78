#ifndef TOLLGAP_BOTTLENECK_HPP
#define TOLLGAP_BOTTLENECK_HPP

#include <optional>

#include "tollgap/model.hpp"

namespace tollgap {

struct TollValue {
  double toll = 0.0;
  double value = 0.0;
};

struct DynamicTollDesign {
  double flat_fraction = 1.0;
  TrapezoidToll policy;
  double revenue = 0.0;
};

struct BoundReport {
  double s = 0.0;  // +inf when z_T == z_C
  double revenue_ratio_lower_bound = 0.0;
  std::optional<double> sc_ratio_upper_bound;
  std::optional<double> unbounded_ratio;  // exact static/optimal SC ratio when z_C = 0
  Regime regime = Regime::MixedLow;
};

// T_C, the peak wait of the car-only equilibrium; 0 without a queue.
double max_wait_car_only(const BottleneckParams& p);

EquilibriumOutcome static_equilibrium(const BottleneckParams& p, double tau);
double static_revenue(const BottleneckParams& p, double tau);
TollValue static_revenue_optimal_toll(const BottleneckParams& p);

// Smallest feasible flat fraction for a trapezoid with peak z_T - z_C.
double min_flat_fraction(const BottleneckParams& p);
double dynamic_revenue_at_fraction(const BottleneckParams& p, double f);
// Trapezoid with peak z_T - z_C whose flat segment covers fraction f of the rush.
TrapezoidToll trapezoid_for_fraction(const BottleneckParams& p, double f);
DynamicTollDesign dynamic_revenue_optimal(const BottleneckParams& p);
DynamicTollDesign dynamic_so_design(const BottleneckParams& p);

CostBreakdown static_system_cost(const BottleneckParams& p, double tau);
CostBreakdown dynamic_ro_system_cost(const BottleneckParams& p);
double optimal_system_cost(const BottleneckParams& p);
TollValue static_sc_optimal_toll(const BottleneckParams& p);

BoundReport theorem_bounds(const BottleneckParams& p);

}  // namespace tollgap

#endif
