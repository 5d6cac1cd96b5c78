#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "tollgap/model.hpp"

using namespace tollgap;

namespace {

BottleneckParams bay(double zt = 1.8290909090909091) {
  return {70000, 14000, 9600, 0.61, 2.4, 1.7136363636363637, zt};
}

}  // namespace

TEST_CASE("validation rejects bad parameters") {
  CHECK_NOTHROW(validate(bay()));
  auto p = bay();
  p.early_penalty = 1.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bay();
  p.total_demand = 0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bay();
  p.late_penalty = -1;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bay();
  p.transit_cost = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = bay();
  p.car_cost = -0.1;
  CHECK_THROWS_AS(classify_regime(p), ValidationError);
}

TEST_CASE("regime thresholds for the bay bridge calibration") {
  const auto p = bay();
  // Lambda e L / ((lambda - mu)(e + L)) with the table values
  const double low = 70000 * 0.61 * 2.4 / (4400 * 3.01);
  CHECK(mixed_low_threshold(p) == doctest::Approx(low).epsilon(1e-12));
  CHECK(mixed_low_threshold(p) == doctest::Approx(7.7379).epsilon(1e-5));
  const double high = (70000 * 0.61 * 2.4 / 3.01) * (1.0 / 4400 + 2.0 / 9600);
  CHECK(mixed_high_threshold(p) == doctest::Approx(high).epsilon(1e-12));
  CHECK(mixed_high_threshold(p) == doctest::Approx(14.8309).epsilon(1e-5));
  CHECK(classify_regime(p) == Regime::MixedLow);
}

TEST_CASE("regime tags") {
  CHECK(classify_regime({1, 1, 2, 0.5, 1, 0.5, 1}) == Regime::Uncongested);
  CHECK(classify_regime({1, 1, 0.5, 0.5, 1, 0.5, 0.4}) == Regime::AllTransit);
  const auto p = bay();
  auto q = p;
  q.transit_cost = q.car_cost + mixed_low_threshold(p) + 1.0;
  CHECK(classify_regime(q) == Regime::MixedMid);
  q.transit_cost = q.car_cost + mixed_high_threshold(p) + 1.0;
  CHECK(classify_regime(q) == Regime::MixedHigh);
  CHECK(std::string(to_string(Regime::MixedHigh)) == "mixed_high");
}

TEST_CASE("rush window runs from zero to demand over rate") {
  const auto w = rush_window(bay());
  CHECK(w.t1 == 0.0);
  CHECK(w.t2 == doctest::Approx(5.0));
}

TEST_CASE("trapezoid toll shape") {
  TrapezoidToll t{2.0, 0.0, 4.0, 6.0, 7.0, 0.5, 2.0};
  CHECK(t.at(-1.0) == 0.0);
  CHECK(t.at(0.0) == doctest::Approx(0.0));
  CHECK(t.at(2.0) == doctest::Approx(1.0));
  CHECK(t.at(5.0) == doctest::Approx(2.0));
  CHECK(t.at(6.5) == doctest::Approx(1.0));
  CHECK(t.at(8.0) == 0.0);
  CHECK(toll_at(StaticToll{0.3}, 100.0) == 0.3);
  CHECK(toll_at(t, 5.0) == doctest::Approx(2.0));
}

TEST_CASE("cost breakdown totals exclude revenue") {
  const auto c = make_breakdown(1, 2, 3, 4, 100);
  CHECK(c.total == 10.0);
  CHECK(c.revenue == 100.0);
}
