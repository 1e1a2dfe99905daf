#include "fdrlab/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "fdrlab/errors.hpp"
#include "fdrlab/format.hpp"
#include "fdrlab/parallel.hpp"
#include "fdrlab/robust.hpp"
#include "fdrlab/testing.hpp"

namespace fdrlab {

namespace {

void require_region_args(std::size_t n, std::size_t k, double alpha) {
  if (n == 0) throw DomainError("confidence region: empty sample");
  if (k > n - 1) {
    throw DomainError("confidence region: contamination bound k = " + std::to_string(k) +
                      " exceeds n - 1 = " + std::to_string(n - 1));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("confidence region: alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

// F0(Y_(l)) for l = 0..n with F0(Y_(0)) = F0(-inf) = 0.
std::vector<double> cdf_at_order_statistics(std::span<const double> sorted, const NullModel& f0) {
  std::vector<double> out(sorted.size() + 1);
  out[0] = 0.0;
  for (std::size_t l = 1; l <= sorted.size(); ++l) out[l] = f0.cdf(sorted[l - 1]);
  return out;
}

// F0(Y_(l+1)^-) for l = 0..n with F0(+inf^-) = 1.
std::vector<double> left_cdf_at_next(std::span<const double> sorted, const NullModel& f0) {
  const std::size_t n = sorted.size();
  std::vector<double> out(n + 1);
  for (std::size_t l = 0; l < n; ++l) out[l] = f0.cdf_left(sorted[l]);
  out[n] = 1.0;
  return out;
}

}  // namespace

double dkw_constant(std::size_t n, std::size_t k, double alpha) {
  require_region_args(n, k, alpha);
  const double nd = static_cast<double>(n);
  const double kept = 1.0 - static_cast<double>(k) / nd;
  return std::sqrt(-kept * std::log(alpha / 2.0) / (2.0 * nd));
}

EnvelopeBounds envelope_bounds(const Sample& y, const NullModel& f0, std::size_t k, double alpha) {
  const std::size_t n = y.size();
  require_region_args(n, k, alpha);
  if (k == 0) throw DomainError("envelope bounds need k >= 1 (k = 0 is the plain DKW band)");

  const double nd = static_cast<double>(n);
  const double share = static_cast<double>(k) / nd;
  const double kept = 1.0 - share;
  const double c = dkw_constant(n, k, alpha);
  const auto f_at = cdf_at_order_statistics(y.sorted(), f0);
  const auto f_next = left_cdf_at_next(y.sorted(), f0);

  EnvelopeBounds out;
  out.dkw = c;
  out.lower.resize(n + 1);
  out.upper.resize(n + 1);

  double running_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j <= n; ++j) {
    running_max = std::max(running_max, static_cast<double>(j) / nd - kept * f_at[j]);
    out.lower[j] = std::max(0.0, (running_max - c) / share);
  }
  double running_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = n + 1; j-- > 0;) {
    running_min = std::min(running_min, static_cast<double>(j) / nd - kept * f_next[j]);
    out.upper[j] = std::min(1.0, (running_min + c) / share);
  }
  return out;
}

bool null_in_region(const Sample& y, const NullModel& f0, std::size_t k, double alpha) {
  const std::size_t n = y.size();
  require_region_args(n, k, alpha);
  if (k == 0) {
    const double nd = static_cast<double>(n);
    const double c = dkw_constant(n, 0, alpha);
    const auto f_at = cdf_at_order_statistics(y.sorted(), f0);
    const auto f_next = left_cdf_at_next(y.sorted(), f0);
    for (std::size_t l = 0; l <= n; ++l) {
      const double step = static_cast<double>(l) / nd;
      if (step - f_at[l] > c || f_next[l] - step > c) return false;
    }
    return true;
  }
  const auto bounds = envelope_bounds(y, f0, k, alpha);
  for (std::size_t j = 0; j <= n; ++j) {
    if (bounds.lower[j] > bounds.upper[j]) return false;
  }
  return true;
}

bool gof_test_single(const Sample& y, const NullModel& f0, std::size_t k, double alpha) {
  return !null_in_region(y, f0, k, alpha);
}

FamilyTestResult gof_test_family(const Sample& y, std::span<const NullModel> family,
                                 std::size_t k, double alpha) {
  if (family.empty()) throw ConfigError("family test: the candidate grid is empty");
  FamilyTestResult out;
  out.in_region = parameter_region_scan(y, family, k, alpha);
  out.reject = std::none_of(out.in_region.begin(), out.in_region.end(), [](bool b) { return b; });
  return out;
}

std::vector<bool> parameter_region_scan(const Sample& y, std::span<const NullModel> family,
                                        std::size_t k, double alpha) {
  require_region_args(y.size(), k, alpha);
  std::vector<char> flags(family.size(), 0);
  parallel_for(family.size(), [&](std::size_t i) {
    flags[i] = null_in_region(y, family[i], k, alpha) ? 1 : 0;
  });
  return {flags.begin(), flags.end()};
}

std::size_t RegionGrid::count_in_region() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const RegionCell& c) { return c.in_region; }));
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw ConfigError("grid: at least one point is required");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw ConfigError("grid: need finite bounds with lo <= hi");
  }
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = 0.5 * (lo + hi);
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

RegionSpec default_region_spec(const Sample& y, std::size_t k, double alpha,
                               std::size_t theta_points, std::size_t sigma2_points) {
  const Scaling est = median_mad_scaling(y);
  if (est.degenerate()) {
    throw DegenerateScaleError("default region grid: MAD of the sample is zero");
  }
  const double half_width = 4.0 * est.sigma_hat * std::sqrt(0.1);
  const double s2 = est.sigma_hat * est.sigma_hat;
  RegionSpec spec;
  spec.k = k;
  spec.alpha = alpha;
  spec.theta_grid = linear_grid(est.theta_hat - half_width, est.theta_hat + half_width, theta_points);
  spec.sigma2_grid = linear_grid(0.25 * s2, 4.0 * s2, sigma2_points);
  return spec;
}

RegionGrid scaling_region_scan(const Sample& y, const RegionSpec& spec) {
  require_region_args(y.size(), spec.k, spec.alpha);
  if (spec.theta_grid.empty() || spec.sigma2_grid.empty()) {
    throw ConfigError("region scan: the candidate grid is empty");
  }
  for (double s2 : spec.sigma2_grid) {
    if (!(s2 > 0.0) || !std::isfinite(s2)) throw ConfigError("region scan: sigma2 must be > 0");
  }
  for (double t : spec.theta_grid) {
    if (!std::isfinite(t)) throw ConfigError("region scan: theta must be finite");
  }

  RegionGrid grid;
  grid.n_theta = spec.theta_grid.size();
  grid.n_sigma2 = spec.sigma2_grid.size();
  grid.cells.resize(grid.n_theta * grid.n_sigma2);
  parallel_for(grid.cells.size(), [&](std::size_t idx) {
    RegionCell& cell = grid.cells[idx];
    cell.theta = spec.theta_grid[idx / grid.n_sigma2];
    cell.sigma2 = spec.sigma2_grid[idx % grid.n_sigma2];
    const double sigma = std::sqrt(cell.sigma2);
    cell.in_region = null_in_region(y, NullModel::gaussian(cell.theta, sigma), spec.k, spec.alpha);
    if (cell.in_region) {
      cell.n_rejections = bh_procedure(y, cell.theta, sigma, spec.alpha).size();
    }
  });
  return grid;
}

void write_region_csv(std::ostream& out, const RegionGrid& grid) {
  out << "theta,sigma2,in_region,n_rejections\n";
  for (const auto& cell : grid.cells) {
    out << format_double(cell.theta) << ',' << format_double(cell.sigma2) << ','
        << (cell.in_region ? 1 : 0) << ',';
    if (cell.n_rejections) out << *cell.n_rejections;
    out << '\n';
  }
}

}  // namespace fdrlab
