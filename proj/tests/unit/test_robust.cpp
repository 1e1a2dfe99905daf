#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdrlab/errors.hpp"
#include "fdrlab/robust.hpp"
#include "fdrlab/rng.hpp"

using namespace fdrlab;

TEST_CASE("median is the ceil(n/2) order statistic") {
  CHECK(median_estimate(Sample({5.0, 1.0, 3.0, 2.0, 4.0})) == 3.0);
  CHECK(median_estimate(Sample({4.0, 1.0, 3.0, 2.0})) == 2.0);
  CHECK(median_estimate(Sample({7.5, 7.5, 7.5})) == 7.5);
  CHECK(median_estimate(Sample({-1.0})) == -1.0);
}

TEST_CASE("mad") {
  CHECK(mad_estimate(Sample({1.0, 2.0, 3.0, 4.0, 5.0})) ==
        doctest::Approx(1.4826022185056018605).epsilon(1e-14));
  CHECK(mad_estimate(Sample({2.0, 2.0, 2.0, 2.0})) == 0.0);
  const Scaling s = median_mad_scaling(Sample({2.0, 2.0, 2.0, 9.0}));
  CHECK(s.degenerate());
  CHECK(s.theta_hat == 2.0);
}

TEST_CASE("trimmed mean") {
  CHECK(trimmed_mean_estimate(Sample({-2.0, -1.0, 0.0, 1.0, 2.0}), 0.5) == 0.0);
  CHECK(trimmed_mean_estimate(Sample({10.0, 0.0, 1.0, 2.0, -50.0}), 0.5) == 1.0);
  CHECK(trimmed_mean_estimate(Sample({3.0, 3.0, 3.0}), 0.5) == 3.0);
  CHECK(trimmed_mean_estimate(Sample({1.0, 2.0, 6.0}), 0.0) == 3.0);
  CHECK_THROWS_AS(trimmed_mean_estimate(Sample({1.0, 2.0}), 1.0), DomainError);
  CHECK_THROWS_AS(trimmed_mean_estimate(Sample({1.0, 2.0}), -0.1), DomainError);
  // n = 2, trim 0.99 drops floor(0.99) = 0 from each side.
  CHECK(trimmed_mean_estimate(Sample({1.0, 2.0}), 0.99) == 1.5);
}

TEST_CASE("median and mad are affine equivariant") {
  RandomStream rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 100);
    std::vector<double> y(n);
    for (auto& v : y) v = rng.normal();
    const double a = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(-5.0, 5.0);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = a * y[i] + b;
    const Scaling sy = median_mad_scaling(Sample(y));
    const Scaling sz = median_mad_scaling(Sample(z));
    CHECK(sz.theta_hat == doctest::Approx(a * sy.theta_hat + b).epsilon(1e-12));
    CHECK(sz.sigma_hat == doctest::Approx(a * sy.sigma_hat).epsilon(1e-10));
  }
}

TEST_CASE("estimators survive ten percent gross contamination") {
  RandomStream rng(8);
  const std::size_t n = 10000;
  std::vector<double> y(n);
  for (auto& v : y) v = rng.normal();
  const Scaling clean = median_mad_scaling(Sample(y));
  for (std::size_t i = 0; i < n / 10; ++i) y[i] = 1e6;
  const Scaling dirty = median_mad_scaling(Sample(y));
  CHECK(std::abs(dirty.theta_hat - clean.theta_hat) < 0.2);
  CHECK(std::abs(dirty.sigma_hat - clean.sigma_hat) < 0.5);
}

TEST_CASE("estimators are nearly unbiased on clean Gaussian data") {
  const double theta = 1.5;
  const double sigma = 2.0;
  const std::size_t n = 10000;
  const int reps = 1000;
  double sum_theta = 0.0;
  double sum_sigma = 0.0;
  double sum_trim = 0.0;
  for (int r = 0; r < reps; ++r) {
    RandomStream rng(1234, static_cast<std::uint64_t>(r));
    std::vector<double> y(n);
    for (auto& v : y) v = theta + sigma * rng.normal();
    const Sample s(y);
    const Scaling est = median_mad_scaling(s);
    sum_theta += est.theta_hat;
    sum_sigma += est.sigma_hat;
    sum_trim += trimmed_mean_estimate(s);
  }
  CHECK(std::abs(sum_theta / reps - theta) < 0.02 * sigma);
  CHECK(std::abs(sum_sigma / reps - sigma) < 0.02 * sigma);
  CHECK(std::abs(sum_trim / reps - theta) < 0.02 * sigma);
}
