#ifndef TOLLGAP_CALIBRATION_HPP
#define TOLLGAP_CALIBRATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "tollgap/mfd.hpp"
#include "tollgap/model.hpp"

namespace tollgap {

// Times in hours, money in dollars.
struct TransitCostSpec {
  double fare = 0.0;
  double walk_time = 0.0;
  double wait_time = 0.0;
  double in_vehicle_time = 0.0;
  double discomfort = 1.0;  // eta

  bool operator==(const TransitCostSpec&) const = default;
};

struct CarCostSpec {
  double parking_fee = 0.0;
  double freeflow_travel_time = 0.0;

  bool operator==(const CarCostSpec&) const = default;
};

struct MfdSpec {
  TriangularMfd mfd;  // jam_accumulation holds the single-run default
  std::vector<double> jam_sweep;

  bool operator==(const MfdSpec&) const = default;
};

struct Scenario {
  std::string name;
  double value_of_time = 0.0;  // dollars/hour
  double total_demand = 0.0;
  double arrival_rate = 0.0;
  double early_penalty = 0.0;
  double late_penalty = 0.0;
  std::optional<double> capacity;
  std::optional<MfdSpec> mfd;
  TransitCostSpec transit;
  CarCostSpec car;
  std::vector<double> eta_sweep;
  std::optional<double> implemented_toll;     // dollars
  std::optional<double> reference_crossover;  // eta quoted for the implemented toll

  bool operator==(const Scenario&) const = default;
};

struct OdRow {
  double distance_miles = 0.0;
  double share_percent = 0.0;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

double transit_cost(const TransitCostSpec& spec, double value_of_time);
double car_cost(const CarCostSpec& spec, double value_of_time);
double weighted_freeflow_time(const std::vector<OdRow>& rows, double speed_mph);
// Origin rows behind the bay_bridge free-flow time.
std::vector<OdRow> bay_bridge_od_rows();

void validate(const Scenario& s);
std::vector<std::string> scenario_warnings(const Scenario& s);

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_names();
// Builtin name or file path.
Scenario resolve_scenario(const std::string& name_or_path);

BottleneckParams to_params(const Scenario& s, double eta);
// Bottleneck scenarios have no MFD; nj <= 0 selects the scenario default.
TriangularMfd to_mfd(const Scenario& s, double nj = 0.0);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace tollgap

#endif
