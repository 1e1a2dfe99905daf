#pragma once

#include <functional>

namespace fdrlab {

// Adaptive Gauss-Kronrod (61 point) integral of f over [lo, hi] to the given
// absolute tolerance. Infinite bounds are allowed.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tolerance = 1e-11);

}  // namespace fdrlab
