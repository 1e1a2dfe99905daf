#pragma once

#include <cstddef>
#include <vector>

#include "fdrlab/distributions.hpp"
#include "fdrlab/rng.hpp"
#include "fdrlab/sample.hpp"

namespace fdrlab {

// Two-group mixture density h that admits two decompositions
//
//   h = (1 - pi1) null1 + pi1 f1 = (1 - pi2) null2 + pi2 f2
//     = max((1 - pi1) null1, (1 - pi2) null2)
//
// with f1 = [(1-pi2) null2 - (1-pi1) null1]_+ / pi1 and
//      f2 = [(1-pi1) null1 - (1-pi2) null2]_+ / pi2.
//
//   variance_gaussian:  null1 = N(0,1), null2 = N(0, sigma2^2); f1 lives on |x| > u0
//   location_gaussian:  null1 = N(0,1), null2 = N(mu, 1);        f1 lives on x > u0
//   location_general:   null1 = g,      null2 = g(. - mu);        f1 lives on x > u0 = mu/2
enum class MixtureKind { variance_gaussian, location_gaussian, location_general };

const char* to_string(MixtureKind kind);

enum class MixtureComponent { mixture, null1, alternative1, null2, alternative2 };

struct MixtureInstance {
  MixtureKind kind = MixtureKind::variance_gaussian;
  double pi1 = 0.0;
  double pi2 = 0.0;
  double solved_param = 1.0;  // sigma2 (variance kind) or mu (location kinds)
  double u0 = 0.0;            // crossing point
  double residual = 0.0;      // |normalization equation| at the solution
  NullModel base = NullModel::gaussian();  // g for location_general, N(0,1) otherwise

  NullModel null_model1() const;
  NullModel null_model2() const;

  double null1_density(double x) const;
  double null2_density(double x) const;
  double alternative1_density(double x) const;
  double alternative2_density(double x) const;
  double mixture_density(double x) const;

  bool in_alternative1_support(double x) const;
};

// Smallest sigma2 in (1, 100] making f1 and f2 densities, 0 < pi1 <= pi2 <= 1/4:
//   2[(1-pi2) Phibar(u0/sigma2) - (1-pi1) Phibar(u0)] = pi1,
//   u0^2 = 2 sigma2^2 / (sigma2^2 - 1) log(sigma2 (1-pi1)/(1-pi2)).
MixtureInstance solve_variance_mixture(double pi1, double pi2);

// Smallest mu in (0, 2) with (1-pi2) Phibar(kappa0 - mu/2) - (1-pi1) Phibar(kappa0 + mu/2) = pi1,
// kappa0 = log((1-pi1)/(1-pi2)) / mu, u0 = kappa0 + mu/2. 0 < pi1 <= pi2 < 1/2.
MixtureInstance solve_location_mixture(double pi1, double pi2);

// pi1 = pi2 = pi and mu = 2 Gbar^{-1}((1 - 2 pi) / (2 (1 - pi))) for a symmetric,
// unimodal location null g. pi in (0, 1/2).
MixtureInstance general_location_mixture(const NullModel& g, double pi);

// max(|int f1 - 1|, |int f2 - 1|) by adaptive quadrature over [-40, 40]
// (split at the crossing points).
double normalization_error(const MixtureInstance& m);

// n independent draws from one component; h is drawn through decomposition 1
// (Bernoulli(pi1) label, then null1 or f1).
Sample sample_mixture(const MixtureInstance& m, std::size_t n, MixtureComponent component,
                      RandomStream& rng);
double draw_component(const MixtureInstance& m, MixtureComponent component, RandomStream& rng);

// Draws from h with the alternative labels of the chosen decomposition (1 or 2).
// The values do not depend on the decomposition; only the labels do.
struct LabeledDraws {
  std::vector<double> values;
  std::vector<bool> alternative;
};
LabeledDraws sample_labeled(const MixtureInstance& m, std::size_t n, int decomposition,
                            RandomStream& rng);

// Alternative labels for given draws of h under the chosen decomposition,
// drawn from P(alternative | Y) = pi_d f_d(Y) / h(Y).
std::vector<bool> draw_labels(const MixtureInstance& m, const std::vector<double>& values,
                              int decomposition, RandomStream& rng);

struct BoundaryConstants {
  double pi_alpha = 0.0;       // (sqrt(1-alpha) - (1-alpha)) / alpha
  double pi_star_alpha = 0.0;  // (1 - sqrt(alpha)) / (2 - sqrt(alpha))
};
BoundaryConstants boundary_constants(double alpha);

// Laplace location model: eta(pi) = (1-pi)/2 [1 + e^mu] with
// e^mu = (1-pi)^2/(1-2pi)^2, and the gap function
// zeta(pi) = (1-pi)/2 [1 + (1-pi)^2/(1-2pi)^2 - 4 / (1 + (1-2pi)^2/(1-pi)^2)].
struct LaplaceInflation {
  double eta = 0.0;
  double gap = 0.0;
};
LaplaceInflation laplace_inflation(double pi);

}  // namespace fdrlab
