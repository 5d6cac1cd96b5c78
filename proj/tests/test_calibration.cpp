#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "tollgap/calibration.hpp"

using namespace tollgap;

namespace {

const char* kMinimal = R"(# bottleneck example
scenario.name = small
economics.value_of_time = 20 dollars/hour
demand.total_demand = 1000 users
demand.arrival_rate = 500 users/hour
supply.capacity = 300 vehicles/hour
schedule.early_penalty = 0.5 ratio
schedule.late_penalty = 2 ratio
transit.fare = 2 dollars
transit.walk_time = 10 minutes
transit.wait_time = 5 min
transit.in_vehicle_time = 0.5 hours
car.parking_fee = 10 dollars
car.freeflow_travel_time = 15 minutes
sweep.eta = 1:3:5 ratio
)";

std::string without(const std::string& text, const std::string& key) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    if (line.rfind(key, 0) != 0) out += line + '\n';
    start = end == std::string::npos ? text.size() : end + 1;
  }
  return out;
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("mode costs") {
  const auto bay = builtin_scenario("bay_bridge");
  auto t = bay.transit;
  t.discomfort = 1.5;
  CHECK(transit_cost(t, 22) == doctest::Approx(6.14 / 22 + 1.55));
  CHECK(transit_cost(t, 22) == doctest::Approx(1.82909).epsilon(1e-5));
  t.discomfort = 18;
  const auto nyc = builtin_scenario("nyc");
  auto tn = nyc.transit;
  tn.discomfort = 18;
  CHECK(transit_cost(tn, 40) == doctest::Approx(10.425));
  CHECK(car_cost(bay.car, 22) == doctest::Approx(1.7136).epsilon(1e-4));
  CHECK(car_cost(nyc.car, 40) == doctest::Approx(0.9));
  CHECK(car_cost({0, 0}, 10) == 0.0);
  CHECK_THROWS_AS(transit_cost(t, 0), ValidationError);

  // affine in eta with slope walk + wait + ride
  auto a = bay.transit;
  a.discomfort = 2.0;
  const double c2 = transit_cost(a, 22);
  a.discomfort = 7.0;
  const double c7 = transit_cost(a, 22);
  CHECK((c7 - c2) / 5 == doctest::Approx(62.0 / 60).epsilon(1e-12));
}

TEST_CASE("weighted free-flow time") {
  // with the table's rounded per-origin times
  std::vector<OdRow> printed{{0.252 * 50, 29.8}, {0.359 * 50, 12.4}, {0.276 * 50, 12.4},
                             {0.544 * 50, 8.6},  {0.506 * 50, 5.0},  {0.622 * 50, 4.8}};
  CHECK(weighted_freeflow_time(printed, 50) == doctest::Approx(0.35038).epsilon(1e-5));
  // straight from the distances
  const double exact = weighted_freeflow_time(bay_bridge_od_rows(), 50);
  CHECK(exact == doctest::Approx(0.35021).epsilon(1e-5));
  CHECK(exact * 60 == doctest::Approx(21).epsilon(0.01));
  CHECK(weighted_freeflow_time({{10, 40}}, 50) == doctest::Approx(0.2));
  CHECK(weighted_freeflow_time({{10, 40}, {10, 40}}, 50) == doctest::Approx(0.2));
  CHECK_THROWS_AS(weighted_freeflow_time({}, 50), ValidationError);
  CHECK_THROWS_AS(weighted_freeflow_time({{10, 40}}, 0), ValidationError);
}

TEST_CASE("builtin scenarios carry the table values") {
  const auto bay = builtin_scenario("bay_bridge");
  CHECK(bay.total_demand == 70000);
  CHECK(bay.arrival_rate == 14000);
  REQUIRE(bay.capacity);
  CHECK(*bay.capacity == 9600);
  CHECK(bay.value_of_time == 22);
  CHECK(bay.implemented_toll.value() == 8.5);
  CHECK(bay.eta_sweep.size() == 100);
  const auto p = to_params(bay, 1.5);
  CHECK(p.cost_gap() == doctest::Approx(0.11545).epsilon(1e-4));

  const auto nyc = builtin_scenario("nyc");
  REQUIRE(nyc.mfd);
  CHECK(nyc.mfd->mfd.trip_distance == 6);
  CHECK(nyc.mfd->mfd.max_throughput == 45000);
  CHECK(nyc.mfd->jam_sweep == std::vector<double>{14000, 42000, 70000, 140000});
  CHECK(to_mfd(nyc).jam_accumulation == 140000);
  CHECK(to_mfd(nyc, 42000).jam_accumulation == 42000);
  CHECK(to_params(nyc, 18).capacity == 45000);
  CHECK(nyc.implemented_toll.value() == 9);

  CHECK_THROWS_AS(builtin_scenario("nowhere"), ValidationError);
  CHECK(builtin_names().size() == 2);
}

TEST_CASE("bay bridge stays in the mixed regime up to eta 4.8") {
  const auto bay = builtin_scenario("bay_bridge");
  for (double eta = 1.0; eta <= 4.8; eta += 0.01) {
    const auto p = to_params(bay, eta);
    CHECK(p.cost_gap() < max_wait_car_only(p));
  }
}

TEST_CASE("builtins round-trip through the text format") {
  for (const auto& name : builtin_names()) {
    const auto s = builtin_scenario(name);
    const auto text = serialize_scenario(s);
    CHECK(parse_scenario(text) == s);
    CHECK(serialize_scenario(parse_scenario(text)) == text);
  }
}

TEST_CASE("units are converted at load") {
  const auto s = parse_scenario(kMinimal);
  CHECK(s.transit.walk_time == doctest::Approx(1.0 / 6));
  CHECK(s.transit.wait_time == doctest::Approx(1.0 / 12));
  CHECK(s.car.freeflow_travel_time == doctest::Approx(0.25));
  CHECK(s.eta_sweep == std::vector<double>{1, 1.5, 2, 2.5, 3});
  CHECK(s.transit.discomfort == 1.0);

  std::string mfd = without(kMinimal, "supply.capacity");
  mfd += "mfd.max_throughput = 300 vehicles/hour\nmfd.jam_accumulation = 5000 vehicles\n"
         "mfd.free_flow_speed = 25 mph\nmfd.trip_distance = 3 miles\n";
  const auto m = parse_scenario(mfd);
  REQUIRE(m.mfd);
  CHECK(m.mfd->mfd.free_flow_speed == doctest::Approx(25 * 1.609344));
  CHECK(m.mfd->mfd.trip_distance == doctest::Approx(3 * 1.609344));
  CHECK(m.mfd->jam_sweep == std::vector<double>{5000});
}

TEST_CASE("parse errors name the key") {
  CHECK(error_of(without(kMinimal, "demand.arrival_rate")).find("arrival_rate") !=
        std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "demand.arrival_rate = 3 users/hour\n")
            .find("duplicate key 'demand.arrival_rate'") != std::string::npos);
  CHECK(error_of(std::string(kMinimal) + "demand.colour = 3 users\n").find("demand.colour") !=
        std::string::npos);
  std::string no_unit = without(kMinimal, "transit.fare") + "transit.fare = 2\n";
  CHECK(error_of(no_unit).find("transit.fare': missing unit") != std::string::npos);
  std::string bad_unit = without(kMinimal, "transit.fare") + "transit.fare = 2 hours\n";
  CHECK(error_of(bad_unit).find("unit 'hours' not accepted") != std::string::npos);
  std::string bad_num = without(kMinimal, "transit.fare") + "transit.fare = two dollars\n";
  CHECK(error_of(bad_num).find("transit.fare") != std::string::npos);
  std::string early = without(kMinimal, "schedule.early_penalty") + "schedule.early_penalty = 1.5 ratio\n";
  CHECK(error_of(early).find("early_penalty") != std::string::npos);
  CHECK(error_of("no equals sign here\n").find("line 1") != std::string::npos);
}

TEST_CASE("files and warnings") {
  const std::string path = "tollgap_test_scenario.txt";
  {
    std::ofstream out(path);
    out << kMinimal << "transit.discomfort = 0.5 ratio\n";
  }
  const auto s = resolve_scenario(path);
  CHECK(s.name == "small");
  CHECK(scenario_warnings(s).size() == 1);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.txt"), ValidationError);
  CHECK(resolve_scenario("nyc").name == "nyc");

  auto low = builtin_scenario("bay_bridge");
  low.eta_sweep = {0.5, 2};
  CHECK(scenario_warnings(low).size() == 1);
}

TEST_CASE("linspace") {
  CHECK(linspace(0, 1, 0).empty());
  CHECK(linspace(2, 5, 1) == std::vector<double>{2});
  const auto v = linspace(1.5, 30, 100);
  CHECK(v.front() == 1.5);
  CHECK(v.back() == 30);
  CHECK(v[1] == doctest::Approx(1.5 + 28.5 / 99));
}
