#include "fdrlab/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdrlab/errors.hpp"

namespace fdrlab {

namespace {

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("level alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

void require_pvalues(std::span<const double> p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw DomainError("p-value " + std::to_string(i + 1) + " outside [0,1]");
    }
  }
}

std::size_t count_intersection(const std::vector<std::size_t>& sorted_rejections,
                               std::span<const std::size_t> set) {
  std::size_t count = 0;
  for (std::size_t i : set) {
    if (std::binary_search(sorted_rejections.begin(), sorted_rejections.end(), i)) ++count;
  }
  return count;
}

}  // namespace

bool RejectionSet::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

PValueVector rescaled_pvalues(const Sample& y, double u, double s, const NullModel& shape) {
  if (s == 0.0) {
    throw DegenerateScaleError("degenerate scale s = 0: rescaled p-values are undefined");
  }
  if (!(s > 0.0)) throw DomainError("scale s must be > 0 or +infinity");
  if (!std::isfinite(u)) throw DomainError("location u must be finite");

  PValueVector out;
  out.u = u;
  out.s = s;
  out.p.resize(y.size());
  const auto values = y.values();
  if (std::isinf(s)) {
    std::fill(out.p.begin(), out.p.end(), 1.0);
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = 2.0 * shape.standard_tail(std::abs(values[i] - u) / s);
    out.p[i] = std::clamp(p, 0.0, 1.0);
  }
  return out;
}

bool at_or_below_step(double p, double alpha, std::size_t k, std::size_t n) {
  using wide = long double;
  return static_cast<wide>(p) * static_cast<wide>(n) <= static_cast<wide>(alpha) * static_cast<wide>(k);
}

std::size_t step_up_count(std::span<const double> p, double alpha) {
  require_level(alpha);
  require_pvalues(p);
  std::vector<double> sorted(p.begin(), p.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  for (std::size_t k = n; k >= 1; --k) {
    if (at_or_below_step(sorted[k - 1], alpha, k, n)) return k;
  }
  return 0;
}

double bh_threshold(std::span<const double> p, double alpha) {
  const std::size_t k = step_up_count(p, alpha);
  if (k == 0) return 0.0;
  return alpha * static_cast<double>(k) / static_cast<double>(p.size());
}

double bh_threshold(const PValueVector& p, double alpha) { return bh_threshold(p.p, alpha); }

RejectionSet bh_reject(std::span<const double> p, double alpha) {
  RejectionSet out;
  out.alpha = alpha;
  const std::size_t k = step_up_count(p, alpha);
  const std::size_t n = p.size();
  if (k == 0) return out;
  out.threshold = alpha * static_cast<double>(k) / static_cast<double>(n);
  out.indices.reserve(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (at_or_below_step(p[i], alpha, k, n)) out.indices.push_back(i);
  }
  return out;
}

RejectionSet bh_procedure(const Sample& y, double u, double s, double alpha,
                          const NullModel& shape) {
  require_level(alpha);
  return bh_reject(rescaled_pvalues(y, u, s, shape).p, alpha);
}

double fdp(const RejectionSet& rejections, std::span<const std::size_t> h0) {
  if (rejections.empty()) return 0.0;
  return static_cast<double>(count_intersection(rejections.indices, h0)) /
         static_cast<double>(rejections.size());
}

double tdp(const RejectionSet& rejections, std::span<const std::size_t> h1) {
  if (h1.empty()) return 0.0;
  return static_cast<double>(count_intersection(rejections.indices, h1)) /
         static_cast<double>(h1.size());
}

double perturbation_envelope(double t, double x, double y) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw DomainError("perturbation envelope: t must lie in [0,1), got " + std::to_string(t));
  }
  if (!(x >= 0.0) || !(y >= 0.0)) {
    throw DomainError("perturbation envelope: shifts x, y must be >= 0");
  }
  if (t == 0.0) {
    // Phibar^{-1}(0) = +inf: the argument tends to +inf when y < 1.
    return y < 1.0 ? 0.0 : 1.0;
  }
  const double z = gaussian_quantile(0.5 * t);
  return std::min(1.0, 2.0 * gaussian_tail(z - x - y * z));
}

}  // namespace fdrlab
