#ifndef TOLLGAP_ORACLE_HPP
#define TOLLGAP_ORACLE_HPP

#include <ostream>
#include <vector>

#include "tollgap/bottleneck.hpp"
#include "tollgap/mfd.hpp"
#include "tollgap/model.hpp"

namespace tollgap::oracle {

// Sampled on a grid of step <= dt with the profile breakpoints inserted.
struct EquilibriumTrace {
  std::vector<double> t;
  std::vector<double> wait;
  std::vector<double> toll;
  std::vector<double> throughput;
  std::vector<double> cum_arrivals;
  std::vector<double> cum_departures;
};

struct Simulation {
  EquilibriumTrace trace;
  EquilibriumOutcome outcome;
  CostBreakdown cost;
};

constexpr double kDefaultStep = 1e-4;

Simulation simulate_static_bottleneck(const BottleneckParams& p, double tau,
                                      double dt = kDefaultStep, bool keep_trace = true);
// Zero-queue equilibrium under a trapezoid toll with peak z_T - z_C.
Simulation simulate_dynamic_bottleneck(const BottleneckParams& p, const TrapezoidToll& toll,
                                       double dt = kDefaultStep, bool keep_trace = true);

TollValue grid_search_static(const BottleneckParams& p, int grid_points);

struct FractionValue {
  double fraction = 1.0;
  double revenue = 0.0;
};

FractionValue grid_search_dynamic_fraction(const BottleneckParams& p, int grid_points);

double integrate_mfd_revenue(const BottleneckParams& p, const TriangularMfd& m, double tau,
                             double dt = kDefaultStep);

void write_trace_csv(const EquilibriumTrace& trace, std::ostream& out);

}  // namespace tollgap::oracle

#endif
