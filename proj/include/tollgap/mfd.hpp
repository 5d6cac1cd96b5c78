#ifndef TOLLGAP_MFD_HPP
#define TOLLGAP_MFD_HPP

#include "tollgap/bottleneck.hpp"
#include "tollgap/model.hpp"

namespace tollgap {

struct TriangularMfd {
  double max_throughput = 0.0;    // mu_f, vehicles/hour
  double jam_accumulation = 0.0;  // n_j, vehicles
  double free_flow_speed = 0.0;   // v_f, km/hour
  double trip_distance = 0.0;     // D, km

  double critical_accumulation() const {
    return max_throughput * trip_distance / free_flow_speed;
  }

  bool operator==(const TriangularMfd&) const = default;
};

void validate(const TriangularMfd& m);

double throughput(const TriangularMfd& m, double n);
double throughput_from_wait(const TriangularMfd& m, double w);

// Bottleneck parameters with capacity replaced by the MFD's max throughput.
BottleneckParams at_max_throughput(const BottleneckParams& p, const TriangularMfd& m);

double static_lower_toll(const BottleneckParams& p, const TriangularMfd& m);
double static_revenue_mfd(const BottleneckParams& p, const TriangularMfd& m, double tau);

struct MfdCostComponents {
  double transit = 0.0;        // C_T
  double car_freeflow = 0.0;   // C_F
  double queue_ontime = 0.0;   // C_Q^O
  double queue_early = 0.0;    // C_Q^E
  double queue_late = 0.0;     // C_Q^L
  double sched_early = 0.0;    // C_S^E
  double sched_late = 0.0;     // C_S^L
};

MfdCostComponents static_cost_components_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                             double tau);
CostBreakdown static_system_cost_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                     double tau);

constexpr int kDefaultGridPoints = 4096;

TollValue static_revenue_optimal_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                     int grid_points = kDefaultGridPoints);
TollValue static_sc_optimal_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                int grid_points = kDefaultGridPoints);

struct DynamicBenchmarks {
  DynamicTollDesign ro;
  DynamicTollDesign so;
  double sc_opt = 0.0;
  CostBreakdown ro_cost;
};

DynamicBenchmarks dynamic_benchmarks_mfd(const BottleneckParams& p, const TriangularMfd& m);

}  // namespace tollgap

#endif
