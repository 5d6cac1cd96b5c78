#include "tollgap/search.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cstdint>
#include <limits>

namespace tollgap {

TollValue grid_golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                               int grid_points) {
  if (grid_points < 2) throw DomainError("grid_points must be at least 2");
  if (!(hi > lo)) return {lo, f(lo)};

  const double step = (hi - lo) / (grid_points - 1);
  TollValue best{lo, std::numeric_limits<double>::infinity()};
  int best_i = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i == grid_points - 1 ? hi : lo + step * i;
    const double v = f(x);
    if (v < best.value) {
      best = {x, v};
      best_i = i;
    }
  }

  const double a = std::max(lo, lo + step * (best_i - 1));
  const double b = std::min(hi, lo + step * (best_i + 1));
  std::uintmax_t iters = 200;
  const auto [x, v] = boost::math::tools::brent_find_minima(
      f, a, b, std::numeric_limits<double>::digits / 2, iters);
  if (v < best.value) best = {x, v};
  return best;
}

TollValue grid_golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                               int grid_points) {
  const TollValue m = grid_golden_minimize([&f](double x) { return -f(x); }, lo, hi, grid_points);
  return {m.toll, -m.value};
}

}  // namespace tollgap
