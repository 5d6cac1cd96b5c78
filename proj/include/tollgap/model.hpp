#ifndef TOLLGAP_MODEL_HPP
#define TOLLGAP_MODEL_HPP

#include <stdexcept>
#include <string>
#include <variant>

namespace tollgap {

// All costs are in hours of waiting time (money divided by the value of time).
struct BottleneckParams {
  double total_demand = 0.0;   // users
  double arrival_rate = 0.0;   // users/hour, desired crossing rate
  double capacity = 0.0;       // vehicles/hour
  double early_penalty = 0.0;  // e
  double late_penalty = 0.0;   // L
  double car_cost = 0.0;       // z_C, hours
  double transit_cost = 0.0;   // z_T, hours

  double cost_gap() const { return transit_cost - car_cost; }
  double capacity_ratio() const { return capacity / arrival_rate; }
  // eL/(e+L)
  double penalty_mean() const {
    return early_penalty * late_penalty / (early_penalty + late_penalty);
  }
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

void validate(const BottleneckParams& p);

enum class Regime { AllTransit, Uncongested, MixedLow, MixedMid, MixedHigh };

const char* to_string(Regime r);

// Cutpoints on z_T - z_C separating the mixed regimes.
double mixed_low_threshold(const BottleneckParams& p);
double mixed_high_threshold(const BottleneckParams& p);

Regime classify_regime(const BottleneckParams& p);

struct RushWindow {
  double t1 = 0.0;
  double t2 = 0.0;
};

RushWindow rush_window(const BottleneckParams& p);

struct StaticToll {
  double level = 0.0;
};

// Toll rises at rise_slope on [t_a, t_b], stays at peak on [t_b, t_c],
// and falls at fall_slope on [t_c, t_d].
struct TrapezoidToll {
  double peak = 0.0;
  double t_a = 0.0;
  double t_b = 0.0;
  double t_c = 0.0;
  double t_d = 0.0;
  double rise_slope = 0.0;
  double fall_slope = 0.0;

  double at(double t) const;
};

using TollPolicy = std::variant<StaticToll, TrapezoidToll>;

double toll_at(const TollPolicy& policy, double t);

struct EquilibriumOutcome {
  double n_early = 0.0;
  double n_late = 0.0;
  double n_ontime_car = 0.0;
  double n_transit = 0.0;
  double peak_wait = 0.0;
  double t_a = 0.0;
  double t_b = 0.0;
  double t_c = 0.0;
  double t_d = 0.0;
  Regime regime = Regime::MixedLow;

  double car_users() const { return n_early + n_late + n_ontime_car; }
};

// User-hours. Revenue is reported alongside but is not part of total.
struct CostBreakdown {
  double transit = 0.0;
  double car_freeflow = 0.0;
  double queuing = 0.0;
  double schedule = 0.0;
  double total = 0.0;
  double revenue = 0.0;
};

CostBreakdown make_breakdown(double transit, double car_freeflow, double queuing,
                             double schedule, double revenue);

}  // namespace tollgap

#endif
