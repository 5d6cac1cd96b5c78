#ifndef TOLLGAP_VERIFY_HPP
#define TOLLGAP_VERIFY_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tollgap/calibration.hpp"
#include "tollgap/mfd.hpp"
#include "tollgap/oracle.hpp"

namespace tollgap {

// Valid parameters with capacity below the arrival rate and z_T >= z_C,
// spread over all three mixed regimes.
BottleneckParams random_params(std::mt19937_64& rng);
TriangularMfd random_mfd(std::mt19937_64& rng, const BottleneckParams& p);

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // worst relative gap or worst margin, per check
  long cases = 0;
  std::string detail;  // description of the worst case
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;

  bool ok() const;
  std::string summary() const;
};

// |a - b| / max(|a|, |b|, floor)
double relative_gap(double a, double b, double floor);

VerifyReport verify_random(std::uint64_t seed, int n_cases, double dt = oracle::kDefaultStep,
                           int grid_points = 10000);
// Bounds, dominance and grid argmax only; no time-stepped oracle, so it scales to many cases.
VerifyReport verify_theorems(std::uint64_t seed, int n_cases, int grid_points = 2000);
VerifyReport verify_scenario(const Scenario& s, double nj = 0.0,
                             int grid_points = kDefaultGridPoints);

}  // namespace tollgap

#endif
