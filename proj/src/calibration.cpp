#include "tollgap/calibration.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tollgap {

namespace {

constexpr double kMile = 1.609344;  // km

enum class Kind { Text, Number, List };

struct KeySpec {
  Kind kind;
  std::map<std::string, double> units;  // accepted unit -> factor to internal unit
};

const std::map<std::string, double> kDollars{{"dollars", 1.0}, {"usd", 1.0}};
const std::map<std::string, double> kHours{
    {"hours", 1.0}, {"hour", 1.0}, {"h", 1.0}, {"minutes", 1.0 / 60}, {"min", 1.0 / 60}};
const std::map<std::string, double> kRatio{{"ratio", 1.0}};
const std::map<std::string, double> kUsers{{"users", 1.0}};
const std::map<std::string, double> kUserRate{{"users/hour", 1.0}, {"users/h", 1.0}};
const std::map<std::string, double> kVehicles{{"vehicles", 1.0}, {"veh", 1.0}};
const std::map<std::string, double> kVehicleRate{{"vehicles/hour", 1.0}, {"veh/h", 1.0}};
const std::map<std::string, double> kDistance{{"km", 1.0}, {"miles", kMile}, {"mi", kMile}};
const std::map<std::string, double> kSpeed{
    {"km/hour", 1.0}, {"km/h", 1.0}, {"mph", kMile}, {"miles/hour", kMile}};
const std::map<std::string, double> kValueOfTime{{"dollars/hour", 1.0}, {"usd/h", 1.0}};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table{
      {"scenario.name", {Kind::Text, {}}},
      {"economics.value_of_time", {Kind::Number, kValueOfTime}},
      {"demand.total_demand", {Kind::Number, kUsers}},
      {"demand.arrival_rate", {Kind::Number, kUserRate}},
      {"supply.capacity", {Kind::Number, kVehicleRate}},
      {"mfd.max_throughput", {Kind::Number, kVehicleRate}},
      {"mfd.jam_accumulation", {Kind::Number, kVehicles}},
      {"mfd.jam_sweep", {Kind::List, kVehicles}},
      {"mfd.free_flow_speed", {Kind::Number, kSpeed}},
      {"mfd.trip_distance", {Kind::Number, kDistance}},
      {"schedule.early_penalty", {Kind::Number, kRatio}},
      {"schedule.late_penalty", {Kind::Number, kRatio}},
      {"transit.fare", {Kind::Number, kDollars}},
      {"transit.walk_time", {Kind::Number, kHours}},
      {"transit.wait_time", {Kind::Number, kHours}},
      {"transit.in_vehicle_time", {Kind::Number, kHours}},
      {"transit.discomfort", {Kind::Number, kRatio}},
      {"car.parking_fee", {Kind::Number, kDollars}},
      {"car.freeflow_travel_time", {Kind::Number, kHours}},
      {"sweep.eta", {Kind::List, kRatio}},
      {"policy.implemented_toll", {Kind::Number, kDollars}},
      {"policy.reference_crossover", {Kind::Number, kRatio}},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError("key '" + key + "': cannot parse number '" + token + "'");
  return v;
}

// "a,b,c" or "lo:hi:n".
std::vector<double> parse_list(const std::string& key, const std::string& token) {
  std::vector<std::string> parts;
  const char sep = token.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(token);
  for (std::string part; std::getline(ss, part, sep);) parts.push_back(trim(part));
  if (sep == ':') {
    if (parts.size() != 3) throw ParseError("key '" + key + "': range must be lo:hi:n");
    const double n = parse_number(key, parts[2]);
    if (n < 0 || n != std::floor(n)) throw ParseError("key '" + key + "': bad range count");
    return linspace(parse_number(key, parts[0]), parse_number(key, parts[1]),
                    static_cast<int>(n));
  }
  std::vector<double> out;
  for (const auto& part : parts) out.push_back(parse_number(key, part));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
  return out;
}

double transit_cost(const TransitCostSpec& spec, double value_of_time) {
  require(value_of_time > 0, "value_of_time must be positive");
  return spec.fare / value_of_time +
         spec.discomfort * (spec.walk_time + spec.wait_time + spec.in_vehicle_time);
}

double car_cost(const CarCostSpec& spec, double value_of_time) {
  require(value_of_time > 0, "value_of_time must be positive");
  return spec.parking_fee / value_of_time + spec.freeflow_travel_time;
}

double weighted_freeflow_time(const std::vector<OdRow>& rows, double speed_mph) {
  require(!rows.empty(), "origin rows must not be empty");
  require(speed_mph > 0, "speed must be positive");
  double weighted = 0.0;
  double shares = 0.0;
  for (const auto& r : rows) {
    require(r.share_percent > 0, "origin shares must be positive");
    require(r.distance_miles >= 0, "origin distances must be nonnegative");
    weighted += r.share_percent * r.distance_miles / speed_mph;
    shares += r.share_percent;
  }
  return weighted / shares;
}

std::vector<OdRow> bay_bridge_od_rows() {
  return {{12.6, 29.8}, {17.9, 12.4}, {13.8, 12.4}, {27.2, 8.6}, {25.3, 5.0}, {31.1, 4.8}};
}

void validate(const Scenario& s) {
  require(!s.name.empty(), "scenario.name must be set");
  require(s.value_of_time > 0, "economics.value_of_time must be positive");
  require(s.total_demand > 0, "demand.total_demand must be positive");
  require(s.arrival_rate > 0, "demand.arrival_rate must be positive");
  require(s.early_penalty > 0 && s.early_penalty < 1, "schedule.early_penalty must lie in (0, 1)");
  require(s.late_penalty > 0, "schedule.late_penalty must be positive");
  require(s.capacity.has_value() != s.mfd.has_value(),
          "exactly one of supply.capacity and the mfd block must be present");
  if (s.capacity) require(*s.capacity > 0, "supply.capacity must be positive");
  if (s.mfd) {
    validate(s.mfd->mfd);
    require(!s.mfd->jam_sweep.empty(), "mfd.jam_sweep must not be empty");
    for (double nj : s.mfd->jam_sweep) {
      TriangularMfd m = s.mfd->mfd;
      m.jam_accumulation = nj;
      validate(m);
    }
  }
  const auto& t = s.transit;
  require(t.fare >= 0 && t.walk_time >= 0 && t.wait_time >= 0 && t.in_vehicle_time >= 0 &&
              t.discomfort >= 0,
          "transit fields must be nonnegative");
  require(s.car.parking_fee >= 0 && s.car.freeflow_travel_time >= 0,
          "car fields must be nonnegative");
  require(!s.eta_sweep.empty(), "sweep.eta must not be empty");
  for (double eta : s.eta_sweep) require(eta >= 0, "sweep.eta values must be nonnegative");
  if (s.implemented_toll) require(*s.implemented_toll >= 0, "policy.implemented_toll must be >= 0");
}

std::vector<std::string> scenario_warnings(const Scenario& s) {
  std::vector<std::string> out;
  if (s.transit.discomfort < 1.0) out.push_back("transit.discomfort below 1");
  for (double eta : s.eta_sweep) {
    if (eta < 1.0) {
      out.push_back("sweep.eta contains values below 1");
      break;
    }
  }
  return out;
}

Scenario parse_scenario(const std::string& text) {
  const auto& table = key_table();
  std::map<std::string, std::string> text_values;
  std::map<std::string, std::vector<double>> values;
  std::set<std::string> seen;

  std::stringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value unit'");
    const std::string key = trim(line.substr(0, eq));
    const std::string rest = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) throw ParseError("unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'");
    if (rest.empty()) throw ParseError("key '" + key + "': missing value");

    if (it->second.kind == Kind::Text) {
      text_values[key] = rest;
      continue;
    }
    std::stringstream tokens(rest);
    std::string value, unit, extra;
    tokens >> value >> unit >> extra;
    if (unit.empty()) throw ParseError("key '" + key + "': missing unit");
    if (!extra.empty()) throw ParseError("key '" + key + "': unexpected text '" + extra + "'");
    const auto u = it->second.units.find(unit);
    if (u == it->second.units.end())
      throw ParseError("key '" + key + "': unit '" + unit + "' not accepted");
    std::vector<double> v = it->second.kind == Kind::List
                                ? parse_list(key, value)
                                : std::vector<double>{parse_number(key, value)};
    for (double& x : v) x *= u->second;
    values[key] = std::move(v);
  }

  auto has = [&](const std::string& k) { return values.count(k) > 0; };
  auto need = [&](const std::string& k) {
    if (!has(k)) throw ParseError("missing required key '" + k + "'");
    return values[k].front();
  };

  Scenario s;
  if (!text_values.count("scenario.name")) throw ParseError("missing required key 'scenario.name'");
  s.name = text_values["scenario.name"];
  s.value_of_time = need("economics.value_of_time");
  s.total_demand = need("demand.total_demand");
  s.arrival_rate = need("demand.arrival_rate");
  s.early_penalty = need("schedule.early_penalty");
  s.late_penalty = need("schedule.late_penalty");

  const bool any_mfd = has("mfd.max_throughput") || has("mfd.jam_accumulation") ||
                       has("mfd.jam_sweep") || has("mfd.free_flow_speed") ||
                       has("mfd.trip_distance");
  if (has("supply.capacity") && any_mfd)
    throw ParseError("key 'supply.capacity' conflicts with the mfd block");
  if (any_mfd) {
    MfdSpec m;
    m.mfd.max_throughput = need("mfd.max_throughput");
    m.mfd.jam_accumulation = need("mfd.jam_accumulation");
    m.mfd.free_flow_speed = need("mfd.free_flow_speed");
    m.mfd.trip_distance = need("mfd.trip_distance");
    m.jam_sweep = has("mfd.jam_sweep") ? values["mfd.jam_sweep"]
                                       : std::vector<double>{m.mfd.jam_accumulation};
    s.mfd = m;
  } else {
    s.capacity = need("supply.capacity");
  }

  s.transit.fare = need("transit.fare");
  s.transit.walk_time = need("transit.walk_time");
  s.transit.wait_time = need("transit.wait_time");
  s.transit.in_vehicle_time = need("transit.in_vehicle_time");
  if (has("transit.discomfort")) s.transit.discomfort = values["transit.discomfort"].front();
  s.car.parking_fee = need("car.parking_fee");
  s.car.freeflow_travel_time = need("car.freeflow_travel_time");
  if (!has("sweep.eta")) throw ParseError("missing required key 'sweep.eta'");
  s.eta_sweep = values["sweep.eta"];
  if (has("policy.implemented_toll")) s.implemented_toll = values["policy.implemented_toll"].front();
  if (has("policy.reference_crossover"))
    s.reference_crossover = values["policy.reference_crossover"].front();

  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "scenario.name = " << s.name << '\n';
  out << "economics.value_of_time = " << fmt(s.value_of_time) << " dollars/hour\n";
  out << "demand.total_demand = " << fmt(s.total_demand) << " users\n";
  out << "demand.arrival_rate = " << fmt(s.arrival_rate) << " users/hour\n";
  if (s.capacity) out << "supply.capacity = " << fmt(*s.capacity) << " vehicles/hour\n";
  if (s.mfd) {
    out << "mfd.max_throughput = " << fmt(s.mfd->mfd.max_throughput) << " vehicles/hour\n";
    out << "mfd.jam_accumulation = " << fmt(s.mfd->mfd.jam_accumulation) << " vehicles\n";
    out << "mfd.jam_sweep = " << fmt_list(s.mfd->jam_sweep) << " vehicles\n";
    out << "mfd.free_flow_speed = " << fmt(s.mfd->mfd.free_flow_speed) << " km/hour\n";
    out << "mfd.trip_distance = " << fmt(s.mfd->mfd.trip_distance) << " km\n";
  }
  out << "schedule.early_penalty = " << fmt(s.early_penalty) << " ratio\n";
  out << "schedule.late_penalty = " << fmt(s.late_penalty) << " ratio\n";
  out << "transit.fare = " << fmt(s.transit.fare) << " dollars\n";
  out << "transit.walk_time = " << fmt(s.transit.walk_time) << " hours\n";
  out << "transit.wait_time = " << fmt(s.transit.wait_time) << " hours\n";
  out << "transit.in_vehicle_time = " << fmt(s.transit.in_vehicle_time) << " hours\n";
  out << "transit.discomfort = " << fmt(s.transit.discomfort) << " ratio\n";
  out << "car.parking_fee = " << fmt(s.car.parking_fee) << " dollars\n";
  out << "car.freeflow_travel_time = " << fmt(s.car.freeflow_travel_time) << " hours\n";
  out << "sweep.eta = " << fmt_list(s.eta_sweep) << " ratio\n";
  if (s.implemented_toll) out << "policy.implemented_toll = " << fmt(*s.implemented_toll) << " dollars\n";
  if (s.reference_crossover)
    out << "policy.reference_crossover = " << fmt(*s.reference_crossover) << " ratio\n";
  return out.str();
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  s.early_penalty = 0.61;
  s.late_penalty = 2.4;
  s.transit.discomfort = 1.5;
  s.car.parking_fee = 30.0;
  if (name == "bay_bridge") {
    s.value_of_time = 22.0;
    s.total_demand = 70000.0;
    s.arrival_rate = 14000.0;
    s.capacity = 9600.0;
    s.transit.fare = 6.14;
    s.transit.walk_time = 20.0 / 60;
    s.transit.wait_time = 10.0 / 60;
    s.transit.in_vehicle_time = 32.0 / 60;
    s.car.freeflow_travel_time = 21.0 / 60;
    s.eta_sweep = linspace(1.5, 30.0, 100);
    s.implemented_toll = 8.50;
    s.reference_crossover = 2.1;
  } else if (name == "nyc") {
    s.value_of_time = 40.0;
    s.total_demand = 900000.0;
    s.arrival_rate = 180000.0;
    MfdSpec m;
    m.mfd.max_throughput = 45000.0;
    m.mfd.jam_accumulation = 140000.0;
    m.mfd.free_flow_speed = 40.0;
    m.mfd.trip_distance = 6.0;
    m.jam_sweep = {14000.0, 42000.0, 70000.0, 140000.0};
    s.mfd = m;
    s.transit.fare = 3.0;
    s.transit.walk_time = 20.0 / 60;
    s.transit.wait_time = 2.5 / 60;
    s.transit.in_vehicle_time = 12.0 / 60;
    s.car.freeflow_travel_time = 6.0 / 40.0;
    s.eta_sweep = linspace(1.5, 18.0, 18);
    s.implemented_toll = 9.0;
    s.reference_crossover = 1.7;
  } else {
    throw ValidationError("unknown builtin scenario '" + name + "'");
  }
  return s;
}

std::vector<std::string> builtin_names() { return {"bay_bridge", "nyc"}; }

Scenario resolve_scenario(const std::string& name_or_path) {
  for (const auto& n : builtin_names())
    if (n == name_or_path) return builtin_scenario(n);
  return load_scenario(name_or_path);
}

BottleneckParams to_params(const Scenario& s, double eta) {
  validate(s);
  TransitCostSpec t = s.transit;
  t.discomfort = eta;
  BottleneckParams p;
  p.total_demand = s.total_demand;
  p.arrival_rate = s.arrival_rate;
  p.capacity = s.capacity ? *s.capacity : s.mfd->mfd.max_throughput;
  p.early_penalty = s.early_penalty;
  p.late_penalty = s.late_penalty;
  p.car_cost = car_cost(s.car, s.value_of_time);
  p.transit_cost = transit_cost(t, s.value_of_time);
  validate(p);
  return p;
}

TriangularMfd to_mfd(const Scenario& s, double nj) {
  if (!s.mfd) throw ValidationError("scenario '" + s.name + "' has no mfd block");
  TriangularMfd m = s.mfd->mfd;
  if (nj > 0) m.jam_accumulation = nj;
  validate(m);
  return m;
}

}  // namespace tollgap
