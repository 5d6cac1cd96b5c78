#ifndef TOLLGAP_REPORT_HPP
#define TOLLGAP_REPORT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tollgap/calibration.hpp"
#include "tollgap/mfd.hpp"

namespace tollgap {

struct SweepRow {
  double eta = 0.0;
  double tau_static_ro_h = 0.0;
  double tau_static_ro_usd = 0.0;
  double tau_static_so_h = 0.0;
  double tau_static_so_usd = 0.0;
  double rev_static_ro = 0.0;
  double rev_static_so = 0.0;
  double rev_dynamic_ro = 0.0;
  double rev_dynamic_so = 0.0;
  double sc_static_ro = 0.0;
  double sc_static_so = 0.0;
  double sc_dynamic_ro = 0.0;
  double sc_opt = 0.0;
  double rev_ratio_static_ro = 0.0;
  double rev_ratio_static_so = 0.0;
  double rev_ratio_dynamic_ro = 0.0;
  double rev_ratio_dynamic_so = 0.0;
  double sc_ratio_static_ro = 0.0;
  double sc_ratio_static_so = 0.0;
  double sc_ratio_dynamic_ro = 0.0;
  double sc_ratio_opt = 0.0;
  Regime regime = Regime::MixedLow;
};

// nj <= 0 selects the scenario default; ignored for bottleneck scenarios.
SweepRow compute_row(const Scenario& s, double eta, double nj = 0.0,
                     int grid_points = kDefaultGridPoints);
// Rows in eta order; evaluation is spread over `threads` workers (0 = hardware).
std::vector<SweepRow> sweep(const Scenario& s, const std::vector<double>& etas, double nj = 0.0,
                            int grid_points = kDefaultGridPoints, unsigned threads = 0);

std::string sweep_csv_header();
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

struct JamDivergence {
  double max_abs_diff = 0.0;
  std::string column;
  double eta = 0.0;
  double nj = 0.0;
};

// Largest numeric difference between each jam-sweep run and the first one.
JamDivergence compare_jam_sweep(const Scenario& s, const std::vector<double>& etas,
                                int grid_points = kDefaultGridPoints);

std::string analyze_report(const Scenario& s, double eta, double nj = 0.0,
                           int grid_points = kDefaultGridPoints);

struct CrossoverReport {
  bool found = false;
  double eta = 0.0;
  SweepRow row;
  std::string text;
};

CrossoverReport toll_crossover(const Scenario& s, double nj = 0.0,
                               int grid_points = kDefaultGridPoints);

}  // namespace tollgap

#endif
