#ifndef TOLLGAP_SEARCH_HPP
#define TOLLGAP_SEARCH_HPP

#include <functional>

#include "tollgap/bottleneck.hpp"

namespace tollgap {

// Uniform grid over [lo, hi] followed by a Brent/golden-section pass on the
// cell pair around the best grid point. Returns the best point seen.
TollValue grid_golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                               int grid_points);
TollValue grid_golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                               int grid_points);

}  // namespace tollgap

#endif
