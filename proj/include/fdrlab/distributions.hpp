#pragma once

#include <memory>
#include <span>
#include <vector>

namespace fdrlab {

// Standard normal density, upper tail P(Z >= t), lower cdf, and the inverse
// of the upper tail. Relative error of gaussian_tail is below 1e-12 on
// |t| <= 8; gaussian_quantile is refined to full double precision.
double gaussian_density(double t);
double gaussian_tail(double t);
double gaussian_cdf(double t);
double gaussian_quantile(double q);  // t with gaussian_tail(t) == q, q in (0,1)

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
// Series below x = a + 1, Lentz continued fraction above.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Subbotin family g(y) = exp(-|y|^zeta / zeta) / L_zeta, zeta > 1, with
// L_zeta = 2 Gamma(1/zeta) zeta^(1/zeta - 1). zeta == 2 is the standard normal.
double subbotin_normalizer(double zeta);
double subbotin_density(double y, double zeta);
double subbotin_tail(double y, double zeta);
double subbotin_quantile(double q, double zeta);  // q in (0,1)

// Laplace density exp(-|y|)/2.
double laplace_density(double y);
double laplace_tail(double y);
double laplace_quantile(double q);  // q in (0, 1/2]

enum class Family { gaussian, subbotin, laplace, tabulated };

const char* to_string(Family family);

// A cdf given on a grid and linearly interpolated between knots. Knots must be
// nondecreasing in x and cdf values nondecreasing in [0,1]. A repeated x value
// encodes a jump: the cdf is right-continuous and cdf_left() returns the
// value just before the jump. Below the first knot the cdf is 0, at and above
// the last knot it is 1.
class CdfTable {
 public:
  CdfTable(std::vector<double> x, std::vector<double> cdf);

  double cdf(double x) const;
  double cdf_left(double x) const;
  // Smallest x with cdf(x) >= p.
  double quantile(double p) const;
  double density(double x) const;

  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return f_; }

 private:
  std::vector<double> x_;
  std::vector<double> f_;
};

// Parametric (or tabulated) candidate null distribution.
class NullModel {
 public:
  static NullModel gaussian(double theta = 0.0, double sigma = 1.0);
  static NullModel subbotin(double zeta, double theta = 0.0);
  static NullModel laplace(double theta = 0.0);
  static NullModel tabulated(CdfTable table);

  Family family() const { return family_; }
  double theta() const { return theta_; }
  double sigma() const { return sigma_; }
  double zeta() const { return zeta_; }
  const CdfTable* table() const { return table_.get(); }

  double density(double x) const;
  double cdf(double x) const;
  // Left limit F(x^-). Equal to cdf(x) for the continuous families.
  double cdf_left(double x) const;
  double tail(double x) const;
  // x with tail(x) == q.
  double tail_quantile(double q) const;

  // The same law with a different location (and scale, Gaussian only).
  NullModel shifted(double theta) const;

  // Law of (X - theta) / sigma; location families have sigma == 1. Not
  // available for tabulated models.
  double standard_density(double z) const;
  double standard_tail(double z) const;
  double standard_tail_quantile(double q) const;

 private:
  NullModel(Family family, double theta, double sigma, double zeta,
            std::shared_ptr<const CdfTable> table);

  Family family_;
  double theta_;
  double sigma_;
  double zeta_;
  std::shared_ptr<const CdfTable> table_;
};

}  // namespace fdrlab
