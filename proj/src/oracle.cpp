#include "tollgap/oracle.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <functional>
#include <iomanip>

namespace tollgap::oracle {

namespace {

void check_step(const BottleneckParams& p, double dt) {
  const RushWindow rush = rush_window(p);
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (dt > (rush.t2 - rush.t1) / 100.0)
    throw DomainError("time step coarser than 1/100 of the rush window");
}

// Nodes covering [t0, t1] with step at most dt; t0 is omitted when skip_first.
void append_nodes(std::vector<double>& nodes, double t0, double t1, double dt, bool skip_first) {
  if (!(t1 > t0)) {
    if (!skip_first) nodes.push_back(t0);
    return;
  }
  const auto n = static_cast<long>(std::ceil((t1 - t0) / dt));
  for (long i = skip_first ? 1 : 0; i <= n; ++i)
    nodes.push_back(i == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / n);
}

// Compensated sum; the car count is later subtracted from the demand.
struct Sum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Profile {
  double t_a, t_b, t_c, t_d;
  double rate;  // vehicles/hour crossing during [t_a, t_d]
  std::function<double(double)> wait;
  std::function<double(double)> toll;
};

// Desired crossing time of the user crossing at t (FIFO over car users).
double desired_time(const BottleneckParams& p, const Profile& f, double t) {
  const RushWindow rush = rush_window(p);
  if (t <= f.t_b) return rush.t1 + f.rate * (t - f.t_a) / p.arrival_rate;
  if (t >= f.t_c) return rush.t2 - f.rate * (f.t_d - t) / p.arrival_rate;
  return t;
}

Simulation run_profile(const BottleneckParams& p, const Profile& f, double dt, bool keep_trace) {
  std::vector<double> nodes;
  append_nodes(nodes, f.t_a, f.t_b, dt, false);
  append_nodes(nodes, f.t_b, f.t_c, dt, true);
  append_nodes(nodes, f.t_c, f.t_d, dt, true);

  const std::size_t n = nodes.size();
  std::vector<double> wait(n), toll(n), sched(n), cum_dep(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = nodes[i];
    wait[i] = f.wait(t);
    toll[i] = f.toll(t);
    const double lag = desired_time(p, f, t) - t;
    sched[i] = f.rate * (lag > 0 ? p.early_penalty * lag : -p.late_penalty * lag);
  }

  Sum car_sum, early_sum, late_sum, queuing_sum, schedule_sum, revenue_sum;
  for (std::size_t i = 1; i < n; ++i) {
    const double h = nodes[i] - nodes[i - 1];
    const double mid = 0.5 * (nodes[i] + nodes[i - 1]);
    const double served = f.rate * h;
    car_sum.add(served);
    if (mid < f.t_b) early_sum.add(served);
    if (mid > f.t_c) late_sum.add(served);
    queuing_sum.add(0.5 * h * f.rate * (wait[i] + wait[i - 1]));
    schedule_sum.add(0.5 * h * (sched[i] + sched[i - 1]));
    revenue_sum.add(0.5 * h * f.rate * (toll[i] + toll[i - 1]));
    cum_dep[i] = car_sum.value();
  }
  const double cars = car_sum.value(), early = early_sum.value(), late = late_sum.value();
  const double queuing = queuing_sum.value(), schedule = schedule_sum.value();
  const double revenue = revenue_sum.value();

  Simulation sim;
  EquilibriumOutcome& o = sim.outcome;
  o.regime = classify_regime(p);
  o.n_early = early;
  o.n_late = late;
  o.n_ontime_car = cars - early - late;
  o.n_transit = p.total_demand - cars;
  o.peak_wait = n ? *std::max_element(wait.begin(), wait.end()) : 0.0;
  o.t_a = f.t_a;
  o.t_b = f.t_b;
  o.t_c = f.t_c;
  o.t_d = f.t_d;
  sim.cost = make_breakdown(p.transit_cost * o.n_transit, p.car_cost * cars, queuing, schedule,
                            revenue);

  if (keep_trace) {
    // Queue entry time of the user departing at nodes[i] is nodes[i] - wait[i].
    std::vector<double> cum_arr(n, 0.0);
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
      while (j + 1 < n && nodes[j + 1] - wait[j + 1] <= nodes[i]) ++j;
      const double entry_j = nodes[j] - wait[j];
      if (entry_j > nodes[i]) continue;
      if (j + 1 < n) {
        const double entry_next = nodes[j + 1] - wait[j + 1];
        const double frac = (nodes[i] - entry_j) / (entry_next - entry_j);
        cum_arr[i] = cum_dep[j] + frac * (cum_dep[j + 1] - cum_dep[j]);
      } else {
        cum_arr[i] = cum_dep[j];
      }
    }
    sim.trace.t = nodes;
    sim.trace.wait = std::move(wait);
    sim.trace.toll = std::move(toll);
    sim.trace.throughput.assign(n, f.rate);
    sim.trace.cum_arrivals = std::move(cum_arr);
    sim.trace.cum_departures = std::move(cum_dep);
  }
  return sim;
}

Simulation all_transit(const BottleneckParams& p, double tau, bool keep_trace) {
  Simulation sim;
  sim.outcome.regime = classify_regime(p);
  sim.outcome.n_transit = p.total_demand;
  sim.cost = make_breakdown(p.transit_cost * p.total_demand, 0, 0, 0, 0);
  if (keep_trace) {
    const RushWindow rush = rush_window(p);
    sim.trace.t = {rush.t1, rush.t2};
    sim.trace.wait = {0, 0};
    sim.trace.toll = {tau, tau};
    sim.trace.throughput = {0, 0};
    sim.trace.cum_arrivals = {0, 0};
    sim.trace.cum_departures = {0, 0};
  }
  return sim;
}

}  // namespace

Simulation simulate_static_bottleneck(const BottleneckParams& p, double tau, double dt,
                                      bool keep_trace) {
  validate(p);
  check_step(p, dt);
  if (!(tau >= 0.0)) throw DomainError("toll must be nonnegative");
  const double gap = p.transit_cost - p.car_cost;
  if (gap < 0.0 || tau > gap) return all_transit(p, tau, keep_trace);

  const RushWindow rush = rush_window(p);
  const double lam = p.arrival_rate;
  const double rate = std::min(p.capacity, lam);
  const double e = p.early_penalty;
  const double l = p.late_penalty;

  double peak = 0.0;
  if (p.capacity < lam) {
    // Ramp users fill the rush as peak grows; the flat segment cannot go negative.
    auto flat = [&](double w) { return (rush.t2 - rush.t1) - rate * (w / e + w / l) / lam; };
    peak = gap - tau;
    if (flat(peak) < 0.0) {
      boost::math::tools::eps_tolerance<double> tol(50);
      std::uintmax_t iters = 200;
      const auto [lo, hi] = boost::math::tools::bisect(flat, 0.0, peak, tol, iters);
      peak = 0.5 * (lo + hi);
    }
  }

  Profile f;
  f.rate = rate;
  f.t_b = rush.t1 + rate * (peak / e) / lam;
  f.t_a = f.t_b - peak / e;
  f.t_c = rush.t2 - rate * (peak / l) / lam;
  f.t_d = f.t_c + peak / l;
  f.wait = [&f, peak, e, l](double t) {
    if (t < f.t_b) return std::max(e * (t - f.t_a), 0.0);
    if (t > f.t_c) return std::max(peak - l * (t - f.t_c), 0.0);
    return peak;
  };
  f.toll = [tau](double) { return tau; };
  return run_profile(p, f, dt, keep_trace);
}

Simulation simulate_dynamic_bottleneck(const BottleneckParams& p, const TrapezoidToll& toll,
                                       double dt, bool keep_trace) {
  validate(p);
  check_step(p, dt);
  if (!(toll.t_a <= toll.t_b && toll.t_b <= toll.t_c && toll.t_c <= toll.t_d))
    throw DomainError("trapezoid breakpoints out of order");

  Profile f;
  f.rate = std::min(p.capacity, p.arrival_rate);
  f.t_a = toll.t_a;
  f.t_b = toll.t_b;
  f.t_c = toll.t_c;
  f.t_d = toll.t_d;
  f.wait = [](double) { return 0.0; };
  f.toll = [toll](double t) { return toll.at(t); };
  return run_profile(p, f, dt, keep_trace);
}

TollValue grid_search_static(const BottleneckParams& p, int grid_points) {
  if (grid_points < 100) throw DomainError("grid search needs at least 100 points");
  const double gap = p.transit_cost - p.car_cost;
  if (gap <= 0.0) return {0.0, 0.0};
  TollValue best{0.0, static_revenue(p, 0.0)};
  for (int i = 1; i < grid_points; ++i) {
    const double tau = i == grid_points - 1 ? gap : gap * i / (grid_points - 1);
    const double r = static_revenue(p, tau);
    if (r > best.value) best = {tau, r};
  }
  return best;
}

FractionValue grid_search_dynamic_fraction(const BottleneckParams& p, int grid_points) {
  if (grid_points < 100) throw DomainError("grid search needs at least 100 points");
  const double lo = min_flat_fraction(p);
  FractionValue best{lo, dynamic_revenue_at_fraction(p, lo)};
  for (int i = 1; i < grid_points; ++i) {
    const double f = i == grid_points - 1 ? 1.0 : lo + (1.0 - lo) * i / (grid_points - 1);
    const double r = dynamic_revenue_at_fraction(p, f);
    if (r > best.revenue) best = {f, r};
  }
  return best;
}

double integrate_mfd_revenue(const BottleneckParams& p, const TriangularMfd& m, double tau,
                             double dt) {
  validate(p);
  validate(m);
  check_step(p, dt);
  const double gap = p.transit_cost - p.car_cost;
  if (!(tau >= 0.0 && tau <= gap)) throw DomainError("toll outside [0, z_T - z_C]");

  const double peak = gap - tau;
  // Cars served while the wait ramps between 0 and the peak at slope s.
  auto ramp_cars = [&](double slope) {
    const double len = peak / slope;
    std::vector<double> nodes;
    append_nodes(nodes, 0.0, len, dt, false);
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double h = nodes[i] - nodes[i - 1];
      sum += 0.5 * h *
             (throughput_from_wait(m, slope * nodes[i]) +
              throughput_from_wait(m, slope * nodes[i - 1]));
    }
    return sum;
  };
  const double early = ramp_cars(p.early_penalty);
  const double late = ramp_cars(p.late_penalty);
  const double flat = p.total_demand / p.arrival_rate - (early + late) / p.arrival_rate;
  if (flat < -1e-9 * p.total_demand / p.arrival_rate)
    throw DomainError("toll below the mixed-mode MFD domain");

  std::vector<double> nodes;
  append_nodes(nodes, 0.0, std::max(flat, 0.0), dt, false);
  double ontime = 0.0;
  const double rate = throughput_from_wait(m, peak);
  for (std::size_t i = 1; i < nodes.size(); ++i) ontime += (nodes[i] - nodes[i - 1]) * rate;
  return tau * (early + late + ontime);
}

void write_trace_csv(const EquilibriumTrace& trace, std::ostream& out) {
  out << "t,wait,toll,throughput,cum_arrivals,cum_departures\n";
  out << std::fixed << std::setprecision(8);
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    out << trace.t[i] << ',' << trace.wait[i] << ',' << trace.toll[i] << ','
        << trace.throughput[i] << ',' << trace.cum_arrivals[i] << ','
        << trace.cum_departures[i] << '\n';
  }
}

}  // namespace tollgap::oracle
