#include "tollgap/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "tollgap/report.hpp"

namespace tollgap {

namespace {

struct Tally {
  std::map<std::string, CheckResult> checks;
  std::vector<std::string> order;

  // gap must stay at or below limit; worst keeps the largest gap seen.
  void record(const std::string& name, double gap, double limit, const std::string& detail) {
    auto [it, fresh] = checks.try_emplace(name);
    if (fresh) {
      it->second.name = name;
      order.push_back(name);
    }
    CheckResult& c = it->second;
    ++c.cases;
    const bool ok = gap <= limit;
    if (!ok) c.pass = false;
    if (gap > c.worst || (c.detail.empty() && !ok)) {
      c.worst = gap;
      c.detail = detail;
    }
  }

  void merge(const Tally& other) {
    for (const auto& name : other.order) {
      const CheckResult& o = other.checks.at(name);
      auto [it, fresh] = checks.try_emplace(name, o);
      if (fresh) {
        order.push_back(name);
        continue;
      }
      CheckResult& c = it->second;
      c.cases += o.cases;
      c.pass = c.pass && o.pass;
      if (o.worst > c.worst) {
        c.worst = o.worst;
        c.detail = o.detail;
      }
    }
  }

  VerifyReport report() const {
    VerifyReport r;
    for (const auto& name : order) r.checks.push_back(checks.at(name));
    return r;
  }
};

std::string describe(const BottleneckParams& p, double extra = NAN) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "Lambda=%.6g lambda=%.6g mu=%.6g e=%.4g L=%.4g z_C=%.6g z_T=%.6g", p.total_demand,
                p.arrival_rate, p.capacity, p.early_penalty, p.late_penalty, p.car_cost,
                p.transit_cost);
  std::string s = buf;
  if (!std::isnan(extra)) s += " at " + std::to_string(extra);
  return s;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

constexpr double kOracleTol = 1e-6;

void compare_costs(Tally& t, const std::string& prefix, const CostBreakdown& closed,
                   const CostBreakdown& numeric, double floor, const std::string& where) {
  t.record(prefix + " transit", relative_gap(closed.transit, numeric.transit, floor), kOracleTol, where);
  t.record(prefix + " car", relative_gap(closed.car_freeflow, numeric.car_freeflow, floor), kOracleTol,
           where);
  t.record(prefix + " queuing", relative_gap(closed.queuing, numeric.queuing, floor), kOracleTol, where);
  t.record(prefix + " schedule", relative_gap(closed.schedule, numeric.schedule, floor), kOracleTol,
           where);
  t.record(prefix + " revenue", relative_gap(closed.revenue, numeric.revenue, floor), kOracleTol, where);
}

void random_case(Tally& t, std::uint64_t seed, int index, double dt, int grid_points,
                 bool with_oracle) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index)};
  std::mt19937_64 rng(seq);
  const BottleneckParams p = random_params(rng);
  const double gap = p.cost_gap();
  const double tc = max_wait_car_only(p);
  const double floor = 1e-6 * p.total_demand * (1.0 + p.transit_cost);
  const std::string where = describe(p);

  // Static tolls across the band, below it, and at the tie.
  const double lo = std::max(0.0, gap - tc);
  const double taus[] = {0.0, lo, lo + (gap - lo) * uniform(rng, 0, 1), gap,
                         gap * uniform(rng, 0, 1)};
  for (double tau : taus) {
    if (with_oracle) {
      const auto sim = oracle::simulate_static_bottleneck(p, tau, dt, false);
      compare_costs(t, "oracle static", static_system_cost(p, tau), sim.cost, floor,
                    describe(p, tau));
      t.record("oracle static peak wait",
               relative_gap(static_equilibrium(p, tau).peak_wait, sim.outcome.peak_wait,
                            1e-9 * (1 + gap)),
               kOracleTol, describe(p, tau));
    }
    const auto eq = static_equilibrium(p, tau);
    const double mass = eq.car_users() + eq.n_transit;
    t.record("mass conservation", relative_gap(mass, p.total_demand, 0), 1e-9, describe(p, tau));
    t.record("revenue identity", relative_gap(static_revenue(p, tau), tau * eq.car_users(), floor),
             1e-9, describe(p, tau));
  }

  const DynamicTollDesign ro = dynamic_revenue_optimal(p);
  const DynamicTollDesign so = dynamic_so_design(p);
  if (with_oracle) {
    const auto dyn = oracle::simulate_dynamic_bottleneck(p, ro.policy, dt, false);
    compare_costs(t, "oracle dynamic", dynamic_ro_system_cost(p), dyn.cost, floor, where);
    const auto dso = oracle::simulate_dynamic_bottleneck(p, so.policy, dt, false);
    t.record("oracle dynamic-so revenue", relative_gap(so.revenue, dso.cost.revenue, floor),
             kOracleTol, where);
    t.record("oracle dynamic-so cost",
             relative_gap(optimal_system_cost(p), dso.cost.total, floor), kOracleTol, where);
  }
  t.record("dynamic revenue R(f*)",
           relative_gap(ro.revenue, dynamic_revenue_at_fraction(p, ro.flat_fraction), floor), 1e-9,
           where);

  const TollValue star = static_revenue_optimal_toll(p);
  if (gap > 0) {
    const TollValue g = oracle::grid_search_static(p, grid_points);
    const double step = gap / (grid_points - 1);
    t.record("grid static toll (steps)", std::abs(g.toll - star.toll) / step, 1.0, where);
    t.record("grid static not above optimum", (g.value - star.value) / (1 + star.value), 1e-12,
             where);
    const oracle::FractionValue fg = oracle::grid_search_dynamic_fraction(p, grid_points);
    const double fstep = (1.0 - min_flat_fraction(p)) / (grid_points - 1);
    if (fstep > 0)
      t.record("grid dynamic fraction (steps)", std::abs(fg.fraction - ro.flat_fraction) / fstep,
               1.0, where);
  }

  // Bounds: margins are positive when violated.
  const BoundReport b = theorem_bounds(p);
  if (ro.revenue > 0) {
    const double rr = star.value / ro.revenue;
    t.record(std::string("revenue ratio bound ") + to_string(b.regime),
             b.revenue_ratio_lower_bound - rr, 1e-12, where);
    t.record("revenue ratio floor 1/2", 0.5 - rr, 1e-12, where);
  }
  t.record("dynamic dominance", (star.value - ro.revenue) / (1 + ro.revenue), 1e-12, where);
  if (gap <= tc) {
    const double sc = optimal_system_cost(p);
    t.record("static cost within 2x", static_system_cost(p, star.toll).total / sc - 2.0, 1e-12,
             where);
    t.record("dynamic cost within 2x", dynamic_ro_system_cost(p).total / sc - 2.0, 1e-12, where);
  }

  BottleneckParams z = p;
  z.car_cost = 0.0;
  const double threshold = mixed_low_threshold(z) * (2.0 - z.capacity_ratio()) / z.capacity_ratio();
  z.transit_cost = threshold * uniform(rng, 1.001, 4.0);
  const BoundReport bz = theorem_bounds(z);
  const double exact = 1.0 + 1.0 / (1.0 - z.capacity_ratio());
  const double ratio = static_system_cost(z, static_revenue_optimal_toll(z).toll).total /
                       optimal_system_cost(z);
  t.record("unbounded ratio formula", relative_gap(ratio, exact, 0), 1e-9, describe(z));
  t.record("unbounded ratio reported", bz.unbounded_ratio ? 0.0 : 1.0, 0.0, describe(z));

  // MFD: Eq. of static revenue against quadrature, and the boundary guarantee.
  const TriangularMfd m = random_mfd(rng, p);
  const double lower = static_lower_toll(p, m);
  const double tau_m = lower + (gap - lower) * uniform(rng, 0, 1);
  if (with_oracle)
    t.record("mfd revenue quadrature",
             relative_gap(static_revenue_mfd(p, m, tau_m),
                          oracle::integrate_mfd_revenue(p, m, tau_m, dt), floor),
             kOracleTol, describe(p, tau_m));
  const BottleneckParams q = at_max_throughput(p, m);
  if (gap <= mixed_low_threshold(q) && gap > 0) {
    const double rstar = dynamic_revenue_optimal(q).revenue;
    t.record("mfd boundary revenue guarantee",
             2.0 / (3.0 - q.capacity_ratio()) - static_revenue_mfd(p, m, gap) / rstar, 1e-12,
             where);
    // The cost half rests on the 2x bound, which also needs gap <= T_C at mu_f.
    if (gap <= max_wait_car_only(q))
      t.record("mfd boundary cost guarantee",
               static_system_cost_mfd(p, m, gap).total / optimal_system_cost(q) - 2.0, 1e-12,
               where);
  }
}

}  // namespace

double relative_gap(double a, double b, double floor) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

BottleneckParams random_params(std::mt19937_64& rng) {
  BottleneckParams p;
  p.arrival_rate = uniform(rng, 1000.0, 20000.0);
  p.total_demand = p.arrival_rate * uniform(rng, 1.0, 6.0);
  p.capacity = p.arrival_rate * uniform(rng, 0.2, 0.95);
  p.early_penalty = uniform(rng, 0.1, 0.9);
  p.late_penalty = uniform(rng, 0.5, 4.0);
  p.car_cost = uniform(rng, 0.0, 3.0);
  const double u = uniform(rng, 0.0, 1.0);
  const double high = mixed_high_threshold(p);
  p.transit_cost = p.car_cost + (u < 0.02 ? 0.0 : high * uniform(rng, 0.0, 1.5));
  return p;
}

TriangularMfd random_mfd(std::mt19937_64& rng, const BottleneckParams& p) {
  TriangularMfd m;
  m.max_throughput = p.capacity;
  m.free_flow_speed = uniform(rng, 20.0, 60.0);
  m.trip_distance = uniform(rng, 2.0, 10.0);
  m.jam_accumulation = m.critical_accumulation() * uniform(rng, 2.0, 50.0);
  return m;
}

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  for (const auto& c : checks) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-4s %-36s cases=%-7ld worst=%.3e", c.pass ? "ok" : "FAIL",
                  c.name.c_str(), c.cases, c.worst);
    out << buf;
    if (!c.pass || c.worst > 0) out << "  [" << c.detail << "]";
    out << '\n';
  }
  out << (ok() ? "verification passed" : "verification FAILED") << '\n';
  return out.str();
}

namespace {

VerifyReport run_random(std::uint64_t seed, int n_cases, double dt, int grid_points,
                        bool with_oracle) {
  if (n_cases <= 0) {
    VerifyReport r;
    r.warnings.push_back("no cases requested; nothing verified");
    return r;
  }
  const unsigned threads =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), n_cases);
  std::vector<Tally> tallies(threads);
  std::atomic<int> next{0};
  auto work = [&](unsigned k) {
    for (int i = next++; i < n_cases; i = next++) random_case(tallies[k], seed, i, dt, grid_points, with_oracle);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(work, k);
  work(0);
  for (auto& th : pool) th.join();

  Tally all;
  for (const auto& t : tallies) all.merge(t);
  return all.report();
}

}  // namespace

VerifyReport verify_random(std::uint64_t seed, int n_cases, double dt, int grid_points) {
  return run_random(seed, n_cases, dt, grid_points, true);
}

VerifyReport verify_theorems(std::uint64_t seed, int n_cases, int grid_points) {
  return run_random(seed, n_cases, oracle::kDefaultStep, grid_points, false);
}

VerifyReport verify_scenario(const Scenario& s, double nj, int grid_points) {
  Tally t;
  const auto rows = sweep(s, s.eta_sweep, nj, grid_points);
  for (const auto& r : rows) {
    const BottleneckParams p = to_params(s, r.eta);
    const std::string where = s.name + " eta=" + std::to_string(r.eta);
    const double floor = 1e-6 * p.total_demand * (1.0 + p.transit_cost);

    for (double v : {r.rev_ratio_static_ro, r.rev_ratio_static_so, r.rev_ratio_dynamic_so})
      t.record("row revenue ratios <= 1", v - 1.0, 1e-12, where);
    for (double v : {r.sc_ratio_static_ro, r.sc_ratio_static_so, r.sc_ratio_dynamic_ro})
      t.record("row cost ratios >= 1", 1.0 - v, 1e-12, where);
    t.record("row dollar columns",
             std::abs(r.tau_static_ro_usd - r.tau_static_ro_h * s.value_of_time), 0.0, where);

    if (r.regime == Regime::AllTransit || r.regime == Regime::Uncongested) continue;
    if (!s.mfd) {
      for (double tau : {r.tau_static_ro_h, r.tau_static_so_h}) {
        const auto sim = oracle::simulate_static_bottleneck(p, tau, oracle::kDefaultStep, false);
        compare_costs(t, "oracle static", static_system_cost(p, tau), sim.cost, floor, where);
      }
      const auto dyn = oracle::simulate_dynamic_bottleneck(p, dynamic_revenue_optimal(p).policy,
                                                           oracle::kDefaultStep, false);
      compare_costs(t, "oracle dynamic", dynamic_ro_system_cost(p), dyn.cost, floor, where);
      if (p.cost_gap() <= max_wait_car_only(p)) {
        t.record("static cost within 2x", r.sc_ratio_static_ro - 2.0, 1e-12, where);
        t.record("dynamic cost within 2x", r.sc_ratio_dynamic_ro - 2.0, 1e-12, where);
      }
      const BoundReport b = theorem_bounds(p);
      t.record("revenue ratio bound", b.revenue_ratio_lower_bound - r.rev_ratio_static_ro, 1e-12,
               where);
    } else {
      const TriangularMfd m = to_mfd(s, nj);
      const double lower = static_lower_toll(p, m);
      for (double tau : {r.tau_static_ro_h, 0.5 * (lower + p.cost_gap())}) {
        t.record("mfd revenue quadrature",
                 relative_gap(static_revenue_mfd(p, m, tau),
                              oracle::integrate_mfd_revenue(p, m, tau), floor),
                 kOracleTol, where);
      }
      const BottleneckParams q = at_max_throughput(p, m);
      const double gap = p.cost_gap();
      if (gap > 0 && gap <= mixed_low_threshold(q)) {
        t.record("mfd boundary revenue guarantee",
                 2.0 / (3.0 - q.capacity_ratio()) -
                     static_revenue_mfd(p, m, gap) / dynamic_revenue_optimal(q).revenue,
                 1e-12, where);
        if (gap <= max_wait_car_only(q))
          t.record("mfd boundary cost guarantee",
                   static_system_cost_mfd(p, m, gap).total / optimal_system_cost(q) - 2.0, 1e-12,
                   where);
      }
    }
  }
  VerifyReport rep = t.report();
  for (const auto& w : scenario_warnings(s)) rep.warnings.push_back(w);
  return rep;
}

}  // namespace tollgap
