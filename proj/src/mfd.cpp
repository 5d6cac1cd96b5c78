#include "tollgap/mfd.hpp"

#include <algorithm>
#include <cmath>

#include "tollgap/search.hpp"

namespace tollgap {

namespace {

// x - log(1 + x), accurate for small x.
double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 3.0 + x2 / 4.0 - x2 * x / 5.0 + x2 * x2 / 6.0);
  }
  return x - std::log1p(x);
}

void require_mfd_setting(const BottleneckParams& p, const TriangularMfd& m, const char* op) {
  validate(p);
  validate(m);
  if (m.max_throughput >= p.arrival_rate)
    throw DomainError(std::string(op) + " needs max throughput below the arrival rate");
  if (p.transit_cost < p.car_cost)
    throw DomainError(std::string(op) + " needs transit_cost >= car_cost");
}

struct MfdState {
  double wait = 0.0;       // peak wait z_T - z_C - tau
  double mu_tau = 0.0;     // throughput at the peak wait
  double log_term = 0.0;   // ln(1 + wait mu_f / n_j)
  double ramp_cars = 0.0;  // cars served on the two ramps
  double cars = 0.0;       // all cars served
  double flat = 0.0;       // t_C - t_B
};

MfdState mfd_state(const BottleneckParams& p, const TriangularMfd& m, double tau) {
  require_mfd_setting(p, m, "static MFD evaluation");
  const double gap = p.cost_gap();
  const double lower = static_lower_toll(p, m);
  const double slack = 1e-12 * std::max(1.0, gap);
  if (!(tau >= lower - slack && tau <= gap + slack))
    throw DomainError("toll outside the mixed-mode MFD domain [lower toll, z_T - z_C]");

  MfdState s;
  s.wait = std::max(gap - tau, 0.0);
  const double nj = m.jam_accumulation;
  s.mu_tau = throughput_from_wait(m, s.wait);
  s.log_term = std::log1p(s.wait * m.max_throughput / nj);
  s.ramp_cars = nj / p.penalty_mean() * s.log_term;
  s.cars = p.total_demand / p.arrival_rate * s.mu_tau + s.ramp_cars * (1.0 - s.mu_tau / p.arrival_rate);
  s.flat = std::max(p.total_demand / p.arrival_rate - s.ramp_cars / p.arrival_rate, 0.0);
  return s;
}

}  // namespace

void validate(const TriangularMfd& m) {
  if (!(m.max_throughput > 0) || !(m.jam_accumulation > 0) || !(m.free_flow_speed > 0) ||
      !(m.trip_distance > 0))
    throw ValidationError("MFD fields must be positive");
  if (!(m.critical_accumulation() < m.jam_accumulation))
    throw ValidationError("critical accumulation must be below jam accumulation");
}

double throughput(const TriangularMfd& m, double n) {
  validate(m);
  if (!(n >= 0.0 && n <= m.jam_accumulation))
    throw DomainError("accumulation outside [0, jam accumulation]");
  const double nc = m.critical_accumulation();
  if (n <= nc) return n * m.free_flow_speed / m.trip_distance;
  return m.max_throughput * (m.jam_accumulation - n) / (m.jam_accumulation - nc);
}

double throughput_from_wait(const TriangularMfd& m, double w) {
  if (!(w >= 0.0)) throw DomainError("wait must be nonnegative");
  return m.jam_accumulation / (m.jam_accumulation / m.max_throughput + w);
}

BottleneckParams at_max_throughput(const BottleneckParams& p, const TriangularMfd& m) {
  BottleneckParams q = p;
  q.capacity = m.max_throughput;
  return q;
}

double static_lower_toll(const BottleneckParams& p, const TriangularMfd& m) {
  require_mfd_setting(p, m, "static_lower_toll");
  const double nj = m.jam_accumulation;
  const double reach = nj / m.max_throughput * std::expm1(p.total_demand * p.penalty_mean() / nj);
  return std::max(0.0, p.cost_gap() - reach);
}

double static_revenue_mfd(const BottleneckParams& p, const TriangularMfd& m, double tau) {
  return tau * mfd_state(p, m, tau).cars;
}

MfdCostComponents static_cost_components_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                             double tau) {
  const MfdState s = mfd_state(p, m, tau);
  const double nj = m.jam_accumulation;
  const double a = nj / m.max_throughput;
  const double e = p.early_penalty;
  const double l = p.late_penalty;

  MfdCostComponents c;
  c.transit = p.transit_cost * (p.total_demand - s.cars);
  c.car_freeflow = p.car_cost * s.cars;
  if (s.wait == 0.0) return c;

  const double x = s.wait / a;
  const double queue_ramp = nj * a * x_minus_log1p(x);
  const double sched_ramp = nj * (s.wait - nj / p.arrival_rate * s.log_term) *
                            (x_minus_log1p(x) / x);
  c.queue_ontime = s.flat * s.mu_tau * s.wait;
  c.queue_early = queue_ramp / e;
  c.queue_late = queue_ramp / l;
  c.sched_early = sched_ramp / e;
  c.sched_late = sched_ramp / l;
  return c;
}

CostBreakdown static_system_cost_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                     double tau) {
  const MfdCostComponents c = static_cost_components_mfd(p, m, tau);
  return make_breakdown(c.transit, c.car_freeflow, c.queue_ontime + c.queue_early + c.queue_late,
                        c.sched_early + c.sched_late, static_revenue_mfd(p, m, tau));
}

TollValue static_revenue_optimal_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                     int grid_points) {
  if (grid_points < 2) throw DomainError("grid_points must be at least 2");
  validate(p);
  const double gap = p.cost_gap();
  if (gap <= 0.0) return {0.0, 0.0};
  const double lo = static_lower_toll(p, m);
  auto revenue = [&](double tau) { return static_revenue_mfd(p, m, std::clamp(tau, lo, gap)); };
  if (lo >= gap) return {gap, revenue(gap)};
  return grid_golden_maximize(revenue, lo, gap, grid_points);
}

TollValue static_sc_optimal_mfd(const BottleneckParams& p, const TriangularMfd& m,
                                int grid_points) {
  if (grid_points < 2) throw DomainError("grid_points must be at least 2");
  validate(p);
  const double gap = p.cost_gap();
  if (gap < 0.0) return {0.0, p.transit_cost * p.total_demand};
  const double lo = static_lower_toll(p, m);
  auto cost = [&](double tau) {
    return static_system_cost_mfd(p, m, std::clamp(tau, lo, gap)).total;
  };
  if (lo >= gap) return {gap, cost(gap)};
  return grid_golden_minimize(cost, lo, gap, grid_points);
}

DynamicBenchmarks dynamic_benchmarks_mfd(const BottleneckParams& p, const TriangularMfd& m) {
  require_mfd_setting(p, m, "dynamic_benchmarks_mfd");
  const BottleneckParams q = at_max_throughput(p, m);
  DynamicBenchmarks b;
  b.ro = dynamic_revenue_optimal(q);
  b.so = dynamic_so_design(q);
  b.sc_opt = optimal_system_cost(q);
  b.ro_cost = dynamic_ro_system_cost(q);
  return b;
}

}  // namespace tollgap
