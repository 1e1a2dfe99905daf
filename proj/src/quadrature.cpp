#include "fdrlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fdrlab {

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tolerance) {
  if (lo == hi) return 0.0;
  using rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  double l1 = 0.0;
  // Boost's tolerance is relative to the L1 norm; probe the magnitude first.
  const double rough = rule::integrate(f, lo, hi, 5, 1e-6, &error, &l1);
  const double scale = std::max(std::abs(rough), l1);
  const double relative = scale > 0.0 ? std::clamp(abs_tolerance / scale, 1e-15, 1e-3) : 1e-12;
  return rule::integrate(f, lo, hi, 18, relative, &error, &l1);
}

}  // namespace fdrlab
