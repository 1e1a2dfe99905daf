#include "fdrlab/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fdrlab/distributions.hpp"
#include "fdrlab/errors.hpp"

namespace fdrlab {

namespace {

std::size_t middle_rank(std::size_t n) { return (n + 1) / 2; }  // ceil(n/2)

}  // namespace

double median_estimate(const Sample& y) { return y.order_statistic(middle_rank(y.size())); }

double mad_estimate(const Sample& y, double center) {
  std::vector<double> deviations;
  deviations.reserve(y.size());
  for (double v : y.values()) deviations.push_back(std::abs(v - center));
  const std::size_t rank = middle_rank(deviations.size());
  std::sort(deviations.begin(), deviations.end());
  const double mad = deviations[rank - 1];
  if (mad == 0.0) return 0.0;
  return mad / gaussian_quantile(0.25);
}

double mad_estimate(const Sample& y) { return mad_estimate(y, median_estimate(y)); }

double trimmed_mean_estimate(const Sample& y, double trim_fraction) {
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw DomainError("trimmed mean: trim fraction must lie in [0,1), got " +
                      std::to_string(trim_fraction));
  }
  const auto sorted = y.sorted();
  const std::size_t n = sorted.size();
  const auto cut = static_cast<std::size_t>(std::floor(static_cast<double>(n) * trim_fraction / 2.0));
  if (2 * cut >= n) throw DomainError("trimmed mean: trimming leaves no observations");
  const auto kept = sorted.subspan(cut, n - 2 * cut);
  return std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
}

Scaling median_mad_scaling(const Sample& y) {
  const double theta = median_estimate(y);
  return {theta, mad_estimate(y, theta)};
}

Scaling trimmed_mad_scaling(const Sample& y, double trim_fraction) {
  const double theta = trimmed_mean_estimate(y, trim_fraction);
  return {theta, mad_estimate(y, theta)};
}

}  // namespace fdrlab
