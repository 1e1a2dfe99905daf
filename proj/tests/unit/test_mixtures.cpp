#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdrlab/errors.hpp"
#include "fdrlab/mixtures.hpp"
#include "fdrlab/quadrature.hpp"
#include "fdrlab/rng.hpp"

using namespace fdrlab;

TEST_CASE("variance mixture solutions") {
  const auto a = solve_variance_mixture(0.2, 0.2);
  CHECK(a.solved_param == doctest::Approx(1.6964443548516).epsilon(1e-10));
  CHECK(a.solved_param * a.solved_param == doctest::Approx(2.877923449107861).epsilon(1e-10));
  CHECK(a.u0 == doctest::Approx(1.272777082272511).epsilon(1e-9));
  CHECK(a.residual <= 1e-10);

  const auto b = solve_variance_mixture(0.125, 0.25);
  CHECK(b.solved_param == doctest::Approx(1.513747768289921).epsilon(1e-10));
  CHECK(b.u0 == doctest::Approx(1.420657145616488).epsilon(1e-9));
  CHECK(b.residual <= 1e-10);

  const auto c = solve_variance_mixture(1.0 / 41.0, 1.0 / 41.0);
  CHECK(c.solved_param == doctest::Approx(1.053028854217284).epsilon(1e-10));
  CHECK(c.u0 == doctest::Approx(1.025943676731911).epsilon(1e-9));

  const auto d = solve_variance_mixture(0.1, 0.1);
  CHECK(d.solved_param == doctest::Approx(1.259370975909079).epsilon(1e-10));
  CHECK(d.u0 == doctest::Approx(1.117263259428217).epsilon(1e-9));

  CHECK_THROWS_AS(solve_variance_mixture(0.3, 0.3), DomainError);
  CHECK_THROWS_AS(solve_variance_mixture(0.2, 0.1), DomainError);
  CHECK_THROWS_AS(solve_variance_mixture(0.0, 0.1), DomainError);
}

TEST_CASE("location mixture solutions") {
  const auto a = solve_location_mixture(0.25, 0.25);
  CHECK(a.solved_param == doctest::Approx(0.861454598590915).epsilon(1e-10));
  CHECK(a.u0 == doctest::Approx(0.4307272992954575).epsilon(1e-9));
  CHECK(a.residual <= 1e-10);
  const auto b = solve_location_mixture(0.15, 0.15);
  CHECK(b.solved_param == doctest::Approx(0.4460156618807335).epsilon(1e-10));
  const auto c = solve_location_mixture(0.1, 0.2);
  CHECK(c.solved_param == doctest::Approx(0.4299934709203492).epsilon(1e-10));
  CHECK(c.u0 == doctest::Approx(0.4889149310185468).epsilon(1e-9));
  CHECK_THROWS_AS(solve_location_mixture(0.25, 0.5), DomainError);
}

TEST_CASE("equal proportions location identity against quadrature") {
  for (double pi : {0.05, 0.15, 0.3, 0.45}) {
    const auto m = solve_location_mixture(pi, pi);
    const double mu = m.solved_param;
    const double excess = integrate(
        [&](double x) { return std::max(0.0, gaussian_density(x - mu) - gaussian_density(x)); },
        mu / 2.0, 40.0);
    CHECK((1.0 - pi) * excess == doctest::Approx(pi).epsilon(1e-9));
  }
}

TEST_CASE("general location mixture") {
  const auto lap = general_location_mixture(NullModel::laplace(), 0.25);
  CHECK(lap.solved_param == doctest::Approx(0.81093021621632876396).epsilon(1e-13));
  CHECK(lap.solved_param == doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-13));
  const auto gau = general_location_mixture(NullModel::gaussian(), 0.25);
  CHECK(gau.solved_param == doctest::Approx(0.86145459859091498041).epsilon(1e-12));
  CHECK(general_location_mixture(NullModel::gaussian(), 1e-9).solved_param < 1e-8);
  CHECK_THROWS_AS(general_location_mixture(NullModel::gaussian(), 0.5), DomainError);
  for (const NullModel& g : {NullModel::gaussian(), NullModel::laplace(), NullModel::subbotin(1.5)}) {
    for (double pi : {0.1, 0.25, 0.4}) {
      const auto m = general_location_mixture(g, pi);
      CHECK(m.residual < 1e-10);
      CHECK(normalization_error(m) < 1e-9);
    }
  }
}

TEST_CASE("solved mixtures normalize and satisfy the two decompositions") {
  std::vector<MixtureInstance> instances = {
      solve_variance_mixture(0.2, 0.2), solve_variance_mixture(0.125, 0.25),
      solve_variance_mixture(0.05, 0.2), solve_variance_mixture(1.0 / 41.0, 1.0 / 41.0),
      solve_location_mixture(0.25, 0.25), solve_location_mixture(0.1, 0.3),
      general_location_mixture(NullModel::laplace(), 0.3)};
  for (const auto& m : instances) {
    CHECK(normalization_error(m) < 1e-9);
    if (m.kind == MixtureKind::variance_gaussian) {
      CHECK(m.solved_param > 1.0);
    } else {
      CHECK(m.solved_param > 0.0);
    }
    for (int i = 0; i <= 10000; ++i) {
      const double x = -8.0 + 16.0 * i / 10000.0;
      const double h = m.mixture_density(x);
      CHECK(std::abs(h - ((1 - m.pi1) * m.null1_density(x) + m.pi1 * m.alternative1_density(x))) <= 1e-10);
      CHECK(std::abs(h - ((1 - m.pi2) * m.null2_density(x) + m.pi2 * m.alternative2_density(x))) <= 1e-10);
    }
  }
}

TEST_CASE("crossing point separates the weighted nulls") {
  for (const auto& m : {solve_variance_mixture(0.2, 0.2), solve_variance_mixture(0.125, 0.25)}) {
    for (int i = 0; i <= 10000; ++i) {
      const double x = -6.0 + 12.0 * i / 10000.0;
      if (std::abs(std::abs(x) - m.u0) < 1e-6) continue;
      const bool first_larger = (1 - m.pi1) * m.null1_density(x) > (1 - m.pi2) * m.null2_density(x);
      CHECK(first_larger == (std::abs(x) < m.u0));
    }
  }
  const auto loc = solve_location_mixture(0.1, 0.2);
  for (int i = 0; i <= 10000; ++i) {
    const double x = -6.0 + 12.0 * i / 10000.0;
    if (std::abs(x - loc.u0) < 1e-6) continue;
    const bool first_larger = (1 - loc.pi1) * loc.null1_density(x) > (1 - loc.pi2) * loc.null2_density(x);
    CHECK(first_larger == (x < loc.u0));
  }
}

TEST_CASE("component samplers") {
  const auto m = solve_variance_mixture(0.2, 0.2);
  RandomStream rng(42);
  const std::size_t n = 100000;

  const Sample null2 = sample_mixture(m, n, MixtureComponent::null2, rng);
  double mean = 0.0;
  double sq = 0.0;
  for (double v : null2.values()) {
    mean += v;
    sq += v * v;
  }
  mean /= n;
  const double var = sq / n - mean * mean;
  const double s2 = m.solved_param * m.solved_param;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(s2 / n));
  CHECK(std::abs(var - s2) < 4.0 * s2 * std::sqrt(2.0 / n));

  const Sample f1 = sample_mixture(m, 20000, MixtureComponent::alternative1, rng);
  for (double v : f1.values()) CHECK(std::abs(v) > m.u0);
  const Sample f2 = sample_mixture(m, 20000, MixtureComponent::alternative2, rng);
  for (double v : f2.values()) CHECK(std::abs(v) < m.u0);

  const auto loc = solve_location_mixture(0.1, 0.2);
  const Sample g1 = sample_mixture(loc, 5000, MixtureComponent::alternative1, rng);
  for (double v : g1.values()) CHECK(v > loc.u0);
  const Sample g2 = sample_mixture(loc, 5000, MixtureComponent::alternative2, rng);
  for (double v : g2.values()) CHECK(v < loc.u0);
}

TEST_CASE("mixture draws follow the mixture cdf") {
  for (const auto& m : {solve_variance_mixture(0.2, 0.2), solve_location_mixture(0.25, 0.25),
                        general_location_mixture(NullModel::laplace(), 0.2)}) {
    RandomStream rng(7);
    const std::size_t n = 100000;
    const Sample h = sample_mixture(m, n, MixtureComponent::mixture, rng);
    const auto sorted = h.sorted();
    // Evaluate the cdf at a subset of order statistics by cumulative quadrature.
    double ks = 0.0;
    double prev_x = -40.0;
    double cdf = 0.0;
    for (std::size_t i = 0; i < n; i += 97) {
      const double x = sorted[i];
      cdf += integrate([&](double t) { return m.mixture_density(t); }, prev_x, x, 1e-12);
      prev_x = x;
      ks = std::max({ks, std::abs(cdf - static_cast<double>(i) / n),
                     std::abs(cdf - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks <= std::sqrt(std::log(2.0 / 0.01) / (2.0 * n)));
  }
}

TEST_CASE("the two decompositions share one dataset") {
  const auto m = solve_location_mixture(0.15, 0.15);
  RandomStream a(5, 1);
  RandomStream b(5, 1);
  const auto d1 = sample_labeled(m, 2000, 1, a);
  const auto d2 = sample_labeled(m, 2000, 2, b);
  CHECK(d1.values == d2.values);
  for (std::size_t i = 0; i < d1.values.size(); ++i) {
    if (d1.alternative[i]) CHECK(d1.values[i] > m.u0);
    if (d2.alternative[i]) CHECK(d2.values[i] < m.u0);
  }
  const auto frac2 = std::count(d2.alternative.begin(), d2.alternative.end(), true) / 2000.0;
  CHECK(std::abs(frac2 - 0.15) < 0.04);
  CHECK_THROWS_AS(sample_labeled(m, 10, 3, a), DomainError);
}

TEST_CASE("samplers are deterministic given the stream") {
  const auto m = solve_variance_mixture(0.125, 0.25);
  RandomStream a(99, 3);
  RandomStream b(99, 3);
  const Sample x = sample_mixture(m, 500, MixtureComponent::mixture, a);
  const Sample y = sample_mixture(m, 500, MixtureComponent::mixture, b);
  CHECK(std::equal(x.values().begin(), x.values().end(), y.values().begin()));
}

TEST_CASE("smaller proportion ratio needs a larger variance gap") {
  // Empirical constant: (sigma2 - 1) (1 + log(pi2/pi1)) / pi2 stays bounded below.
  double smallest = 1e9;
  for (double pi2 : {0.05, 0.1, 0.2, 0.25}) {
    for (double ratio : {1.0, 0.5, 0.1, 0.01}) {
      const double pi1 = pi2 * ratio;
      const auto m = solve_variance_mixture(pi1, pi2);
      smallest = std::min(smallest, (m.solved_param - 1.0) * (1.0 + std::log(pi2 / pi1)) / pi2);
    }
  }
  CHECK(smallest > 0.1);
}

TEST_CASE("boundary constants") {
  const auto q = boundary_constants(0.25);
  CHECK(q.pi_star_alpha == 1.0 / 3.0);
  CHECK(q.pi_alpha == doctest::Approx(0.46410161513775458705).epsilon(1e-14));
  for (int i = 0; i < 100; ++i) {
    const double alpha = 0.01 + 0.98 * i / 99.0;
    const auto c = boundary_constants(alpha);
    CHECK(c.pi_alpha > 0.0);
    CHECK(c.pi_alpha < 0.5);
    CHECK(c.pi_star_alpha > 0.0);
    // The closed forms order as pi*_alpha < pi_alpha.
    CHECK(c.pi_star_alpha < c.pi_alpha);
  }
  CHECK_THROWS_AS(boundary_constants(0.0), DomainError);
  CHECK_THROWS_AS(boundary_constants(1.0), DomainError);
}

TEST_CASE("laplace inflation") {
  const auto l = laplace_inflation(0.25);
  CHECK(l.eta == doctest::Approx(1.21875).epsilon(1e-15));
  CHECK(l.gap == doctest::Approx(0.18028846153846153846).epsilon(1e-14));
  double prev_eta = 0.0;
  double prev_gap = -1.0;
  for (int i = 1; i <= 100; ++i) {
    const double pi = 0.49 * i / 100.0;
    const auto v = laplace_inflation(pi);
    CHECK(v.eta > 1.0);
    CHECK(v.gap > 0.0);
    CHECK(v.eta > prev_eta);
    CHECK(v.gap > prev_gap);
    prev_eta = v.eta;
    prev_gap = v.gap;
  }
  CHECK_THROWS_AS(laplace_inflation(0.5), DomainError);
}
