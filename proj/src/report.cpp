#include "tollgap/report.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>
#include <utility>

namespace tollgap {

namespace {

double ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : std::copysign(INFINITY, num);
  return num / den;
}

void finish_row(SweepRow& r, double value_of_time) {
  r.tau_static_ro_usd = r.tau_static_ro_h * value_of_time;
  r.tau_static_so_usd = r.tau_static_so_h * value_of_time;
  r.rev_ratio_static_ro = ratio(r.rev_static_ro, r.rev_dynamic_ro);
  r.rev_ratio_static_so = ratio(r.rev_static_so, r.rev_dynamic_ro);
  r.rev_ratio_dynamic_ro = ratio(r.rev_dynamic_ro, r.rev_dynamic_ro);
  r.rev_ratio_dynamic_so = ratio(r.rev_dynamic_so, r.rev_dynamic_ro);
  r.sc_ratio_static_ro = ratio(r.sc_static_ro, r.sc_opt);
  r.sc_ratio_static_so = ratio(r.sc_static_so, r.sc_opt);
  r.sc_ratio_dynamic_ro = ratio(r.sc_dynamic_ro, r.sc_opt);
  r.sc_ratio_opt = ratio(r.sc_opt, r.sc_opt);
}

// Rows where no queue can form or nobody drives.
bool trivial_row(const BottleneckParams& p, SweepRow& r) {
  const double lam = p.total_demand;
  if (r.regime == Regime::AllTransit) {
    r.sc_static_ro = r.sc_static_so = r.sc_dynamic_ro = r.sc_opt = p.transit_cost * lam;
    return true;
  }
  if (r.regime == Regime::Uncongested) {
    const double gap = p.cost_gap();
    r.tau_static_ro_h = r.tau_static_so_h = gap;
    r.rev_static_ro = r.rev_static_so = r.rev_dynamic_ro = r.rev_dynamic_so = gap * lam;
    r.sc_static_ro = r.sc_static_so = r.sc_dynamic_ro = r.sc_opt = p.car_cost * lam;
    return true;
  }
  return false;
}

std::vector<std::pair<const char*, double>> numeric_fields(const SweepRow& r) {
  return {{"eta", r.eta},
          {"tau_static_ro_h", r.tau_static_ro_h},
          {"tau_static_ro_usd", r.tau_static_ro_usd},
          {"tau_static_so_h", r.tau_static_so_h},
          {"tau_static_so_usd", r.tau_static_so_usd},
          {"rev_static_ro", r.rev_static_ro},
          {"rev_static_so", r.rev_static_so},
          {"rev_dynamic_ro", r.rev_dynamic_ro},
          {"rev_dynamic_so", r.rev_dynamic_so},
          {"sc_static_ro", r.sc_static_ro},
          {"sc_static_so", r.sc_static_so},
          {"sc_dynamic_ro", r.sc_dynamic_ro},
          {"sc_opt", r.sc_opt},
          {"rev_ratio_static_ro", r.rev_ratio_static_ro},
          {"rev_ratio_static_so", r.rev_ratio_static_so},
          {"rev_ratio_dynamic_ro", r.rev_ratio_dynamic_ro},
          {"rev_ratio_dynamic_so", r.rev_ratio_dynamic_so},
          {"sc_ratio_static_ro", r.sc_ratio_static_ro},
          {"sc_ratio_static_so", r.sc_ratio_static_so},
          {"sc_ratio_dynamic_ro", r.sc_ratio_dynamic_ro},
          {"sc_ratio_opt", r.sc_ratio_opt}};
}

std::string num(double v, int digits = 8) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

BottleneckParams effective_params(const Scenario& s, double eta, double nj) {
  const BottleneckParams p = to_params(s, eta);
  return s.mfd ? at_max_throughput(p, to_mfd(s, nj)) : p;
}

// Revenue-optimal static toll, continued below zero by z_T - z_C when nobody drives.
double signed_static_toll(const Scenario& s, double eta, double nj, int grid_points) {
  const BottleneckParams p = to_params(s, eta);
  if (p.cost_gap() < 0) return p.cost_gap();
  if (s.mfd) return static_revenue_optimal_mfd(p, to_mfd(s, nj), grid_points).toll;
  return static_revenue_optimal_toll(p).toll;
}

}  // namespace

SweepRow compute_row(const Scenario& s, double eta, double nj, int grid_points) {
  const BottleneckParams p = to_params(s, eta);
  SweepRow r;
  r.eta = eta;

  if (!s.mfd) {
    r.regime = classify_regime(p);
    if (!trivial_row(p, r)) {
      const TollValue ro = static_revenue_optimal_toll(p);
      const TollValue so = static_sc_optimal_toll(p);
      r.tau_static_ro_h = ro.toll;
      r.tau_static_so_h = so.toll;
      r.rev_static_ro = ro.value;
      r.rev_static_so = static_revenue(p, so.toll);
      r.rev_dynamic_ro = dynamic_revenue_optimal(p).revenue;
      r.rev_dynamic_so = dynamic_so_design(p).revenue;
      r.sc_static_ro = static_system_cost(p, ro.toll).total;
      r.sc_static_so = so.value;
      r.sc_dynamic_ro = dynamic_ro_system_cost(p).total;
      r.sc_opt = optimal_system_cost(p);
    }
  } else {
    const TriangularMfd m = to_mfd(s, nj);
    const BottleneckParams q = at_max_throughput(p, m);
    r.regime = classify_regime(q);
    if (!trivial_row(q, r)) {
      const TollValue ro = static_revenue_optimal_mfd(p, m, grid_points);
      const TollValue so = static_sc_optimal_mfd(p, m, grid_points);
      const DynamicBenchmarks dyn = dynamic_benchmarks_mfd(p, m);
      r.tau_static_ro_h = ro.toll;
      r.tau_static_so_h = so.toll;
      r.rev_static_ro = ro.value;
      r.rev_static_so = static_revenue_mfd(p, m, so.toll);
      r.rev_dynamic_ro = dyn.ro.revenue;
      r.rev_dynamic_so = dyn.so.revenue;
      r.sc_static_ro = static_system_cost_mfd(p, m, ro.toll).total;
      r.sc_static_so = so.value;
      r.sc_dynamic_ro = dyn.ro_cost.total;
      r.sc_opt = dyn.sc_opt;
    }
  }
  finish_row(r, s.value_of_time);
  return r;
}

std::vector<SweepRow> sweep(const Scenario& s, const std::vector<double>& etas, double nj,
                            int grid_points, unsigned threads) {
  validate(s);
  std::vector<SweepRow> rows(etas.size());
  std::vector<std::exception_ptr> errors(etas.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(etas.size(), 1));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < etas.size(); i = next++) {
      try {
        rows[i] = compute_row(s, etas[i], nj, grid_points);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string sweep_csv_header() {
  std::string h;
  for (const auto& [name, v] : numeric_fields(SweepRow{})) h += std::string(name) + ",";
  return h + "regime";
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows) {
    for (const auto& [name, v] : numeric_fields(r)) out << num(v) << ',';
    out << to_string(r.regime) << '\n';
  }
}

JamDivergence compare_jam_sweep(const Scenario& s, const std::vector<double>& etas,
                                int grid_points) {
  JamDivergence d;
  if (!s.mfd || s.mfd->jam_sweep.size() < 2) return d;
  const auto& jams = s.mfd->jam_sweep;
  const auto base = sweep(s, etas, jams.front(), grid_points);
  for (std::size_t k = 1; k < jams.size(); ++k) {
    const auto rows = sweep(s, etas, jams[k], grid_points);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto a = numeric_fields(base[i]);
      const auto b = numeric_fields(rows[i]);
      for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = std::abs(a[c].second - b[c].second);
        if (diff > d.max_abs_diff) d = {diff, a[c].first, etas[i], jams[k]};
      }
    }
  }
  return d;
}

std::string analyze_report(const Scenario& s, double eta, double nj, int grid_points) {
  const BottleneckParams p = to_params(s, eta);
  const BottleneckParams q = effective_params(s, eta, nj);
  const SweepRow r = compute_row(s, eta, nj, grid_points);
  const double cw = s.value_of_time;
  std::ostringstream out;

  out << "scenario: " << s.name << "  eta = " << num(eta, 4) << '\n';
  out << "z_T = " << num(p.transit_cost, 6) << " h, z_C = " << num(p.car_cost, 6)
      << " h, z_T - z_C = " << num(p.cost_gap(), 6) << " h ($" << num(p.cost_gap() * cw, 2)
      << ")\n";
  if (s.mfd) {
    const TriangularMfd m = to_mfd(s, nj);
    out << "MFD: n_j = " << num(m.jam_accumulation, 0) << ", n_c = "
        << num(m.critical_accumulation(), 2) << ", mu_f = " << num(m.max_throughput, 0) << '\n';
    if (p.cost_gap() >= 0 && m.max_throughput < p.arrival_rate)
      out << "lowest mixed-mode toll = " << num(static_lower_toll(p, m), 6) << " h\n";
  }
  out << "regime: " << to_string(r.regime) << '\n';

  if (r.regime == Regime::AllTransit) {
    out << "all users take transit; revenue 0\n";
    out << "system cost = " << num(r.sc_opt, 2) << " user-hours\n";
    return out.str();
  }
  if (r.regime != Regime::Uncongested) out << "T_C = " << num(max_wait_car_only(q), 6) << " h\n";

  auto line = [&](const char* name, const std::string& toll, double rev, double rev_ratio,
                  double sc, double sc_ratio) {
    out << "  " << name << ": toll " << toll << ", revenue " << num(rev, 2) << " (ratio "
        << num(rev_ratio, 6) << "), system cost " << num(sc, 2) << " (ratio " << num(sc_ratio, 6)
        << ")\n";
  };
  auto toll = [&](double h) { return num(h, 6) + " h ($" + num(h * cw, 2) + ")"; };
  out << "policies (user-hours; revenue ratio vs dynamic revenue-optimal, cost ratio vs optimum):\n";
  line("static revenue-optimal", toll(r.tau_static_ro_h), r.rev_static_ro, r.rev_ratio_static_ro,
       r.sc_static_ro, r.sc_ratio_static_ro);
  line("static cost-optimal   ", toll(r.tau_static_so_h), r.rev_static_so, r.rev_ratio_static_so,
       r.sc_static_so, r.sc_ratio_static_so);
  line("dynamic revenue-opt   ", "trapezoid, peak " + toll(p.cost_gap()), r.rev_dynamic_ro, 1.0,
       r.sc_dynamic_ro, r.sc_ratio_dynamic_ro);
  line("dynamic cost-optimal  ", "trapezoid, peak " + toll(p.cost_gap()), r.rev_dynamic_so,
       r.rev_ratio_dynamic_so, r.sc_opt, 1.0);
  out << "  revenue in dollars: static $" << num(r.rev_static_ro * cw, 0) << ", dynamic $"
      << num(r.rev_dynamic_ro * cw, 0) << '\n';

  if (r.regime != Regime::Uncongested) {
    const DynamicTollDesign d = dynamic_revenue_optimal(q);
    out << "dynamic revenue-optimal flat fraction f* = " << num(d.flat_fraction, 6)
        << ", breakpoints t_A..t_D = " << num(d.policy.t_a, 4) << ", " << num(d.policy.t_b, 4)
        << ", " << num(d.policy.t_c, 4) << ", " << num(d.policy.t_d, 4) << " h\n";
    const BoundReport b = theorem_bounds(q);
    out << "bounds: s = " << num(b.s, 6) << ", static/dynamic revenue >= "
        << num(b.revenue_ratio_lower_bound, 6);
    if (b.sc_ratio_upper_bound) out << ", static cost ratio <= " << num(*b.sc_ratio_upper_bound, 1);
    if (b.unbounded_ratio) out << ", exact static cost ratio " << num(*b.unbounded_ratio, 6);
    out << '\n';
    if (s.mfd) {
      out << "note: static revenue bound applies to the MFD only when z_T - z_C <= "
          << num(mixed_low_threshold(q), 6) << " h\n";
    }
  }
  return out.str();
}

CrossoverReport toll_crossover(const Scenario& s, double nj, int grid_points) {
  CrossoverReport rep;
  std::ostringstream out;
  if (!s.implemented_toll) {
    rep.text = "scenario '" + s.name + "' has no implemented toll\n";
    return rep;
  }
  const double target = *s.implemented_toll;
  auto g = [&](double eta) {
    return signed_static_toll(s, eta, nj, grid_points) * s.value_of_time - target;
  };
  constexpr double lo = 1.0;
  constexpr double hi = 30.0;
  out << "scenario: " << s.name << '\n';
  out << "implemented toll: $" << num(target, 2) << " (" << num(target / s.value_of_time, 8)
      << " h)\n";

  const double glo = g(lo);
  const double ghi = g(hi);
  if (glo > 0 || ghi < 0) {
    out << "no crossover for eta in [1, 30]\n";
    rep.text = out.str();
    return rep;
  }
  if (glo == 0) {
    rep.eta = lo;
  } else if (ghi == 0) {
    rep.eta = hi;
  } else {
    boost::math::tools::eps_tolerance<double> tol(45);
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::bisect(g, lo, hi, tol, iters);
    rep.eta = 0.5 * (a + b);
  }
  rep.found = true;
  rep.row = compute_row(s, rep.eta, nj, grid_points);
  out << "crossover eta: " << num(rep.eta, 6) << '\n';
  out << "revenue-optimal static toll there: $" << num(rep.row.tau_static_ro_usd, 4) << '\n';
  out << "static revenue ratio: " << num(rep.row.rev_ratio_static_ro, 6)
      << ", static cost ratio: " << num(rep.row.sc_ratio_static_ro, 6) << '\n';
  if (s.reference_crossover) {
    const double diff = rep.eta - *s.reference_crossover;
    out << "reference crossover: " << num(*s.reference_crossover, 2) << " (difference "
        << num(diff, 4) << (std::abs(diff) <= 0.1 ? ", within 0.1" : ", outside 0.1") << ")\n";
  }
  out << "note: informational; the crossover moves with the transit-time calibration\n";
  rep.text = out.str();
  return rep;
}

}  // namespace tollgap
