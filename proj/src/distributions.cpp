#include "fdrlab/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "fdrlab/errors.hpp"

namespace fdrlab {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684759;  // 1/sqrt(2 pi)
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110452530070;

// Acklam's rational approximation of the lower-tail normal quantile,
// relative error about 1.15e-9; refined below by Halley steps.
double lower_quantile_seed(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double log_gamma(double a) {
  // std::lgamma writes the global signgam on glibc; tgamma is pure.
  if (a > 0.0 && a < 100.0) return std::log(std::tgamma(a));
  return std::lgamma(a);
}

double gamma_series_p(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

double gamma_continued_fraction_q(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

void require_zeta(double zeta) {
  if (!(zeta > 1.0) || !std::isfinite(zeta)) {
    throw DomainError("subbotin: shape zeta must be a finite value > 1, got " +
                      std::to_string(zeta));
  }
}

void require_open_unit(double q, const char* what) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0,1), got " +
                      std::to_string(q));
  }
}

// Inverts a decreasing tail on [0, inf) by bisection. q in (0, 1/2).
template <typename Tail>
double invert_tail(Tail&& tail, double q) {
  double lo = 0.0;
  double hi = 1.0;
  while (tail(hi) > q) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (tail(mid) > q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double gaussian_density(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double gaussian_tail(double t) {
  if (std::isnan(t)) return t;
  return 0.5 * std::erfc(t * std::numbers::sqrt2 * 0.5);
}

double gaussian_cdf(double t) { return gaussian_tail(-t); }

double gaussian_quantile(double q) {
  require_open_unit(q, "gaussian_quantile");
  if (q == 0.5) return 0.0;
  const double p = std::min(q, 1.0 - q);
  double x = lower_quantile_seed(p);
  for (int step = 0; step < 2; ++step) {
    const double density = gaussian_density(x);
    if (density == 0.0) break;
    const double u = (gaussian_cdf(x) - p) / density;
    x -= u / (1.0 + 0.5 * x * u);
  }
  // x solves Phi(x) = p with x < 0.
  return q < 0.5 ? -x : x;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_p: a must be > 0");
  if (x < 0.0) throw DomainError("regularized_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series_p(a, x);
  return 1.0 - gamma_continued_fraction_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_q: a must be > 0");
  if (x < 0.0) throw DomainError("regularized_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
  return gamma_continued_fraction_q(a, x);
}

double subbotin_normalizer(double zeta) {
  require_zeta(zeta);
  return 2.0 * std::tgamma(1.0 / zeta) * std::pow(zeta, 1.0 / zeta - 1.0);
}

double subbotin_density(double y, double zeta) {
  return std::exp(-std::pow(std::abs(y), zeta) / zeta) / subbotin_normalizer(zeta);
}

double subbotin_tail(double y, double zeta) {
  require_zeta(zeta);
  if (std::isnan(y)) return y;
  if (y < 0.0) return 1.0 - subbotin_tail(-y, zeta);
  return 0.5 * regularized_gamma_q(1.0 / zeta, std::pow(y, zeta) / zeta);
}

double subbotin_quantile(double q, double zeta) {
  require_zeta(zeta);
  require_open_unit(q, "subbotin_quantile");
  if (q == 0.5) return 0.0;
  if (q > 0.5) return -subbotin_quantile(1.0 - q, zeta);
  return invert_tail([zeta](double y) { return subbotin_tail(y, zeta); }, q);
}

double laplace_density(double y) { return 0.5 * std::exp(-std::abs(y)); }

double laplace_tail(double y) {
  if (y >= 0.0) return 0.5 * std::exp(-y);
  return 1.0 - 0.5 * std::exp(y);
}

double laplace_quantile(double q) {
  if (!(q > 0.0 && q <= 0.5)) {
    throw DomainError("laplace_quantile: probability must lie in (0, 1/2], got " +
                      std::to_string(q));
  }
  return -std::log(2.0 * q);
}

const char* to_string(Family family) {
  switch (family) {
    case Family::gaussian:
      return "gaussian";
    case Family::subbotin:
      return "subbotin";
    case Family::laplace:
      return "laplace";
    case Family::tabulated:
      return "tabulated";
  }
  return "unknown";
}

// --- CdfTable ---------------------------------------------------------------

CdfTable::CdfTable(std::vector<double> x, std::vector<double> cdf)
    : x_(std::move(x)), f_(std::move(cdf)) {
  if (x_.empty() || x_.size() != f_.size()) {
    throw ConfigError("cdf table: need matching, nonempty knot and value arrays");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !(f_[i] >= 0.0 && f_[i] <= 1.0)) {
      throw ConfigError("cdf table: knot " + std::to_string(i) +
                        " must be finite with a value in [0,1]");
    }
    if (i > 0 && (x_[i] < x_[i - 1] || f_[i] < f_[i - 1])) {
      throw ConfigError("cdf table: not monotone at knot " + std::to_string(i));
    }
  }
}

double CdfTable::cdf(double x) const {
  if (x < x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  // First knot strictly greater than x; the knot before it is <= x.
  const auto hi = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  const std::size_t lo = hi - 1;
  if (x == x_[lo]) {
    // Right-continuous: take the largest value recorded at this abscissa.
    return f_[lo];
  }
  const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
  return f_[lo] + w * (f_[hi] - f_[lo]);
}

double CdfTable::cdf_left(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x > x_.back()) return 1.0;
  // First knot >= x; the knot before it is < x.
  const auto hi = static_cast<std::size_t>(std::lower_bound(x_.begin(), x_.end(), x) - x_.begin());
  const std::size_t lo = hi - 1;
  // x_[lo] < x, so the segment (lo, hi) is nondegenerate and its right end
  // carries the first value recorded at x_[hi].
  if (x == x_[hi]) return f_[hi];
  const double w = (x - x_[lo]) / (x_[hi] - x_[lo]);
  return f_[lo] + w * (f_[hi] - f_[lo]);
}

double CdfTable::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("cdf table quantile: p outside [0,1]");
  if (p <= 0.0) return x_.front();
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (f_[i] >= p) {
      if (i == 0 || x_[i] == x_[i - 1] || f_[i] == f_[i - 1]) return x_[i];
      const double w = (p - f_[i - 1]) / (f_[i] - f_[i - 1]);
      return x_[i - 1] + w * (x_[i] - x_[i - 1]);
    }
  }
  return x_.back();
}

double CdfTable::density(double x) const {
  if (x < x_.front() || x >= x_.back()) return 0.0;
  const auto hi = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  const std::size_t lo = hi - 1;
  return (f_[hi] - f_[lo]) / (x_[hi] - x_[lo]);
}

// --- NullModel --------------------------------------------------------------

NullModel::NullModel(Family family, double theta, double sigma, double zeta,
                     std::shared_ptr<const CdfTable> table)
    : family_(family), theta_(theta), sigma_(sigma), zeta_(zeta), table_(std::move(table)) {}

NullModel NullModel::gaussian(double theta, double sigma) {
  if (!std::isfinite(theta)) throw DomainError("gaussian null: theta must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("gaussian null: sigma must be finite and > 0");
  }
  return NullModel(Family::gaussian, theta, sigma, 2.0, nullptr);
}

NullModel NullModel::subbotin(double zeta, double theta) {
  if (!std::isfinite(theta)) throw DomainError("subbotin null: theta must be finite");
  if (zeta == 1.0) return laplace(theta);
  require_zeta(zeta);
  return NullModel(Family::subbotin, theta, 1.0, zeta, nullptr);
}

NullModel NullModel::laplace(double theta) {
  if (!std::isfinite(theta)) throw DomainError("laplace null: theta must be finite");
  return NullModel(Family::laplace, theta, 1.0, 1.0, nullptr);
}

NullModel NullModel::tabulated(CdfTable table) {
  return NullModel(Family::tabulated, 0.0, 1.0, 0.0,
                   std::make_shared<const CdfTable>(std::move(table)));
}

NullModel NullModel::shifted(double theta) const {
  NullModel copy = *this;
  copy.theta_ = theta;
  return copy;
}

double NullModel::standard_density(double z) const {
  switch (family_) {
    case Family::gaussian:
      return gaussian_density(z);
    case Family::subbotin:
      return subbotin_density(z, zeta_);
    case Family::laplace:
      return laplace_density(z);
    case Family::tabulated:
      break;
  }
  throw DomainError("tabulated null has no standardized form");
}

double NullModel::standard_tail(double z) const {
  switch (family_) {
    case Family::gaussian:
      return gaussian_tail(z);
    case Family::subbotin:
      return subbotin_tail(z, zeta_);
    case Family::laplace:
      return laplace_tail(z);
    case Family::tabulated:
      break;
  }
  throw DomainError("tabulated null has no standardized form");
}

double NullModel::standard_tail_quantile(double q) const {
  switch (family_) {
    case Family::gaussian:
      return gaussian_quantile(q);
    case Family::subbotin:
      return subbotin_quantile(q, zeta_);
    case Family::laplace:
      require_open_unit(q, "laplace tail quantile");
      return q <= 0.5 ? laplace_quantile(q) : -laplace_quantile(1.0 - q);
    case Family::tabulated:
      break;
  }
  throw DomainError("tabulated null has no standardized form");
}

double NullModel::density(double x) const {
  if (family_ == Family::tabulated) return table_->density(x);
  return standard_density((x - theta_) / sigma_) / sigma_;
}

double NullModel::cdf(double x) const {
  if (family_ == Family::tabulated) return table_->cdf(x);
  return standard_tail((theta_ - x) / sigma_);
}

double NullModel::cdf_left(double x) const {
  if (family_ == Family::tabulated) return table_->cdf_left(x);
  return cdf(x);
}

double NullModel::tail(double x) const {
  if (family_ == Family::tabulated) return 1.0 - table_->cdf_left(x);
  return standard_tail((x - theta_) / sigma_);
}

double NullModel::tail_quantile(double q) const {
  if (family_ == Family::tabulated) {
    require_open_unit(q, "tabulated tail quantile");
    return table_->quantile(1.0 - q);
  }
  return theta_ + sigma_ * standard_tail_quantile(q);
}

}  // namespace fdrlab
