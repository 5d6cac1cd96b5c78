#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "tollgap/report.hpp"
#include "tollgap/verify.hpp"

using namespace tollgap;

namespace {

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(rows, out);
  return out.str();
}

}  // namespace

TEST_CASE("rows are internally consistent") {
  for (const auto& name : builtin_names()) {
    const auto s = builtin_scenario(name);
    for (const auto& r : sweep(s, s.eta_sweep)) {
      CHECK(r.rev_ratio_static_ro == doctest::Approx(r.rev_static_ro / r.rev_dynamic_ro).epsilon(1e-12));
      CHECK(r.sc_ratio_dynamic_ro == doctest::Approx(r.sc_dynamic_ro / r.sc_opt).epsilon(1e-12));
      for (double v : {r.rev_ratio_static_ro, r.rev_ratio_static_so, r.rev_ratio_dynamic_so})
        CHECK(v <= 1 + 1e-12);
      for (double v : {r.sc_ratio_static_ro, r.sc_ratio_static_so, r.sc_ratio_dynamic_ro})
        CHECK(v >= 1 - 1e-12);
      CHECK(r.tau_static_ro_usd == r.tau_static_ro_h * s.value_of_time);
      CHECK(r.tau_static_so_usd == r.tau_static_so_h * s.value_of_time);
      CHECK(r.sc_ratio_opt == 1.0);
    }
  }
}

TEST_CASE("bay bridge anchors") {
  const auto s = builtin_scenario("bay_bridge");
  const auto r = compute_row(s, 1.5);
  CHECK(r.regime == Regime::MixedLow);
  CHECK(r.sc_ratio_static_ro == doctest::Approx(1.00033537).epsilon(1e-4));
  CHECK(r.sc_ratio_dynamic_ro == doctest::Approx(1.00015769).epsilon(1e-4));
  CHECK(r.tau_static_so_h == doctest::Approx(r.tau_static_ro_h));
}

TEST_CASE("nyc anchors are the same for every jam accumulation") {
  const auto s = builtin_scenario("nyc");
  const auto base = compute_row(s, 1.5);
  CHECK(base.rev_ratio_static_ro == doctest::Approx(0.99568183).epsilon(1e-6));
  CHECK(base.rev_ratio_dynamic_so == doctest::Approx(0.99952020).epsilon(1e-6));
  const auto far = compute_row(s, 18);
  CHECK(far.rev_ratio_static_ro == doctest::Approx(0.47583426).epsilon(1e-6));
  CHECK(far.sc_ratio_static_ro == doctest::Approx(1.76931204).epsilon(1e-6));
  for (double nj : s.mfd->jam_sweep) {
    CHECK(csv({compute_row(s, 1.5, nj), compute_row(s, 18, nj)}) == csv({base, far}));
  }
  CHECK(compare_jam_sweep(s, s.eta_sweep).max_abs_diff == 0.0);
}

TEST_CASE("csv layout") {
  const auto header = sweep_csv_header();
  CHECK(header.rfind("eta,tau_static_ro_h,tau_static_ro_usd,", 0) == 0);
  CHECK(header.find(",regime") != std::string::npos);
  CHECK(csv({}) == header + "\n");
  const auto s = builtin_scenario("bay_bridge");
  const auto text = csv(sweep(s, {1.5, 2.0}));
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.find("1.50000000,") != std::string::npos);
}

TEST_CASE("sweep output is deterministic") {
  const auto s = builtin_scenario("bay_bridge");
  const auto a = csv(sweep(s, s.eta_sweep, 0, kDefaultGridPoints, 1));
  const auto b = csv(sweep(s, s.eta_sweep, 0, kDefaultGridPoints, 8));
  CHECK(a == b);
  CHECK(a == csv(sweep(s, s.eta_sweep)));
}

TEST_CASE("analysis report") {
  const auto s = builtin_scenario("bay_bridge");
  const auto text = analyze_report(s, 1.5);
  CHECK(text.find("mixed_low") != std::string::npos);
  CHECK(text.find("ratio 1.000338") != std::string::npos);
  const auto nyc = analyze_report(builtin_scenario("nyc"), 1.5);
  CHECK(nyc.find("ratio 0.995682") != std::string::npos);
  // eta low enough that transit beats a free-flow car trip
  const auto cheap = analyze_report(s, 1.0);
  CHECK(cheap.find("all users take transit; revenue 0") != std::string::npos);
}

TEST_CASE("toll crossover") {
  const auto bay = builtin_scenario("bay_bridge");
  const auto b = toll_crossover(bay);
  REQUIRE(b.found);
  CHECK(b.eta == doctest::Approx(1.7622).epsilon(1e-4));
  CHECK(b.row.tau_static_ro_usd == doctest::Approx(8.5).epsilon(1e-9));
  CHECK(b.text.find("outside 0.1") != std::string::npos);
  CHECK(b.text.find("informational") != std::string::npos);

  auto zero = bay;
  zero.implemented_toll = 0.0;
  const auto z = toll_crossover(zero);
  REQUIRE(z.found);
  const auto p = to_params(zero, z.eta);
  CHECK(p.transit_cost == doctest::Approx(p.car_cost).epsilon(1e-10));

  auto huge = bay;
  huge.implemented_toll = 1e6;
  CHECK(!toll_crossover(huge).found);
  auto none = bay;
  none.implemented_toll.reset();
  CHECK(!toll_crossover(none).found);
}

TEST_CASE("verification entry points") {
  const auto empty = verify_random(1, 0);
  CHECK(empty.ok());
  CHECK(empty.warnings.size() == 1);
  const auto small = verify_random(3, 20);
  CHECK(small.ok());
  CHECK(verify_theorems(5, 500).ok());
  CHECK(verify_scenario(builtin_scenario("nyc")).ok());
}
