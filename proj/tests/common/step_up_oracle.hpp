#pragma once

// Brute-force threshold T = max{t in [0,1] : #{p_i <= t} >= n t / alpha},
// searched over the candidate set {0} u {p_i} u {alpha k / n} in exact
// rational arithmetic on the binary values of p and alpha.

#include <cstddef>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

namespace fdrlab::testing_oracle {

using Rational = boost::multiprecision::cpp_rational;

inline bool admissible(std::span<const double> p, const Rational& alpha, const Rational& t) {
  if (t < 0 || t > 1) return false;
  std::size_t count = 0;
  for (double x : p) {
    if (Rational(x) <= t) ++count;
  }
  return Rational(count) * alpha >= Rational(p.size()) * t;
}

inline Rational brute_force_threshold(std::span<const double> p, double alpha_d) {
  const Rational alpha(alpha_d);
  const std::size_t n = p.size();
  Rational best = 0;
  for (double x : p) {
    const Rational t(x);
    if (t > best && admissible(p, alpha, t)) best = t;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const Rational t = alpha * Rational(k) / Rational(n);
    if (t > best && admissible(p, alpha, t)) best = t;
  }
  return best;
}

}  // namespace fdrlab::testing_oracle
