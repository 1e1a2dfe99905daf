#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fdrlab/distributions.hpp"
#include "fdrlab/sample.hpp"

namespace fdrlab {

// c_{n,alpha} = sqrt(-(1 - k/n) log(alpha/2) / (2n)), 0 <= k <= n-1.
double dkw_constant(std::size_t n, std::size_t k, double alpha);

// Lower and upper envelopes a_hat(j), b_hat(j), j = 0..n, that the cdf of the
// contaminating part must fit between when f0 is the null. A cdf f0 belongs
// to the confidence superset iff lower[j] <= upper[j] for every j.
struct EnvelopeBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  double dkw = 0.0;
};

// Requires k >= 1; the k == 0 case is decided by null_in_region directly.
EnvelopeBounds envelope_bounds(const Sample& y, const NullModel& f0, std::size_t k, double alpha);

// Membership of f0 in the (1 - alpha) confidence superset of the plausible
// nulls with at most k contaminated observations. For k == 0 this is the
// two-sided Kolmogorov band sup |F_n - F0| <= c_{n,alpha}.
bool null_in_region(const Sample& y, const NullModel& f0, std::size_t k, double alpha);

// Level-alpha test of "f0 is a plausible null": rejects iff f0 is outside.
bool gof_test_single(const Sample& y, const NullModel& f0, std::size_t k, double alpha);

struct FamilyTestResult {
  bool reject = false;
  std::vector<bool> in_region;  // per candidate, same order as the input
};

// Rejects iff no candidate of the (finite) family lies in the region.
FamilyTestResult gof_test_family(const Sample& y, std::span<const NullModel> family,
                                 std::size_t k, double alpha);

// Gaussian candidates N(theta, sigma2) on a theta x sigma2 grid.
struct RegionSpec {
  std::size_t k = 0;
  double alpha = 0.1;
  std::vector<double> theta_grid;
  std::vector<double> sigma2_grid;
};

struct RegionCell {
  double theta = 0.0;
  double sigma2 = 1.0;
  bool in_region = false;
  std::optional<std::size_t> n_rejections;  // |BH_alpha(Y; theta, sigma)|, in-region cells only
};

// Cells are stored theta-major: cell(i, j) has theta_grid[i], sigma2_grid[j].
struct RegionGrid {
  std::size_t n_theta = 0;
  std::size_t n_sigma2 = 0;
  std::vector<RegionCell> cells;

  const RegionCell& cell(std::size_t i, std::size_t j) const { return cells[i * n_sigma2 + j]; }
  std::size_t count_in_region() const;
};

// Evenly spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

// Grid centered on the median/MAD estimate: theta in theta_hat +- 4 sigma_hat
// sqrt(0.1), sigma2 in sigma_hat^2 * [1/4, 4].
RegionSpec default_region_spec(const Sample& y, std::size_t k, double alpha,
                               std::size_t theta_points = 60, std::size_t sigma2_points = 60);

RegionGrid scaling_region_scan(const Sample& y, const RegionSpec& spec);

// Membership flags for an arbitrary candidate family (same order as input).
std::vector<bool> parameter_region_scan(const Sample& y, std::span<const NullModel> family,
                                        std::size_t k, double alpha);

// CSV with header theta,sigma2,in_region,n_rejections; cells outside the region
// leave n_rejections empty.
void write_region_csv(std::ostream& out, const RegionGrid& grid);

}  // namespace fdrlab
