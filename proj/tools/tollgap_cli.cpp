#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tollgap/calibration.hpp"
#include "tollgap/report.hpp"
#include "tollgap/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;

std::vector<double> parse_eta_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw tollgap::ValidationError("--eta-range must be lo:hi:n");
  try {
    const int n = std::stoi(parts[2]);
    if (n < 0) throw tollgap::ValidationError("--eta-range count must be >= 0");
    return tollgap::linspace(std::stod(parts[0]), std::stod(parts[1]), n);
  } catch (const std::logic_error&) {
    throw tollgap::ValidationError("--eta-range must be lo:hi:n with numbers");
  }
}

void print_warnings(const tollgap::Scenario& s) {
  for (const auto& w : tollgap::scenario_warnings(s)) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static vs dynamic congestion pricing analysis"};
  app.require_subcommand(1);

  std::string scenario_arg = "bay_bridge";
  double eta = 1.5;
  std::string eta_range;
  int grid = tollgap::kDefaultGridPoints;
  std::uint64_t seed = 42;
  int cases = 1000;
  std::string out_path;
  double nj = 0.0;
  bool random_suite = false;

  auto* analyze = app.add_subcommand("analyze", "Report all four policies at one eta");
  auto* sweep = app.add_subcommand("sweep", "CSV of policy metrics over an eta grid");
  auto* verify = app.add_subcommand("verify", "Closed forms against the numeric oracle");
  auto* crossover = app.add_subcommand("crossover", "eta at which the optimal toll hits the implemented one");

  for (auto* sub : {analyze, sweep, verify, crossover}) {
    sub->add_option("--scenario", scenario_arg, "Builtin name (bay_bridge, nyc) or scenario file")
        ->capture_default_str();
    sub->add_option("--grid", grid, "Grid points for MFD toll searches")->capture_default_str();
    sub->add_option("--nj", nj, "Jam accumulation override for MFD scenarios (vehicles)");
  }
  analyze->add_option("--eta", eta, "Discomfort multiplier")->capture_default_str();
  sweep->add_option("--eta-range", eta_range, "lo:hi:n; defaults to the scenario sweep");
  sweep->add_option("--out", out_path, "Output CSV path (stdout when omitted)");
  verify->add_option("--seed", seed, "Seed for the random suite")->capture_default_str();
  verify->add_option("--cases", cases, "Random cases")->capture_default_str();
  verify->add_flag("--random", random_suite, "Run the random suite instead of a scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*verify && (random_suite || scenario_arg == "random")) {
      const auto rep = tollgap::verify_random(seed, cases);
      std::cout << rep.summary();
      return rep.ok() ? kExitOk : kExitVerification;
    }

    const tollgap::Scenario s = tollgap::resolve_scenario(scenario_arg);
    print_warnings(s);

    if (*analyze) {
      std::cout << tollgap::analyze_report(s, eta, nj, grid);
      return kExitOk;
    }
    if (*sweep) {
      const std::vector<double> etas = eta_range.empty() ? s.eta_sweep : parse_eta_range(eta_range);
      const auto rows = tollgap::sweep(s, etas, nj, grid);
      if (out_path.empty()) {
        tollgap::write_sweep_csv(rows, std::cout);
      } else {
        std::ofstream out(out_path);
        if (!out) throw tollgap::ValidationError("cannot write '" + out_path + "'");
        tollgap::write_sweep_csv(rows, out);
        if (!out) throw tollgap::ValidationError("write to '" + out_path + "' failed");
      }
      if (s.mfd && nj <= 0 && s.mfd->jam_sweep.size() > 1) {
        const auto d = tollgap::compare_jam_sweep(s, etas, grid);
        if (d.max_abs_diff == 0.0) {
          std::cerr << "jam accumulation sweep: identical output for all "
                    << s.mfd->jam_sweep.size() << " values\n";
        } else {
          std::cerr << "jam accumulation sweep: outputs differ; max |diff| = " << d.max_abs_diff
                    << " in " << d.column << " at eta " << d.eta << ", n_j " << d.nj << '\n';
        }
      }
      return kExitOk;
    }
    if (*verify) {
      const auto rep = tollgap::verify_scenario(s, nj, grid);
      std::cout << rep.summary();
      return rep.ok() ? kExitOk : kExitVerification;
    }
    if (*crossover) {
      std::cout << tollgap::toll_crossover(s, nj, grid).text;
      return kExitOk;
    }
  } catch (const tollgap::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
