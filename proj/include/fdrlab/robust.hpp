#pragma once

#include "fdrlab/sample.hpp"

namespace fdrlab {

// Estimated location and scale of the null. sigma_hat == 0 marks a
// degenerate sample (more than half the points share one value).
struct Scaling {
  double theta_hat = 0.0;
  double sigma_hat = 1.0;

  bool degenerate() const { return sigma_hat == 0.0; }
};

// Y_(ceil(n/2)); for even n this is the lower middle order statistic, not the
// average of the two middle values.
double median_estimate(const Sample& y);

// U_(ceil(n/2)) / Phibar^{-1}(1/4) with U_i = |Y_i - center|. Returns 0 when
// the median absolute deviation vanishes.
double mad_estimate(const Sample& y, double center);
double mad_estimate(const Sample& y);  // centered at median_estimate(y)

// Mean of the order statistics left after dropping floor(n * trim / 2) values
// from each end. trim in [0,1).
double trimmed_mean_estimate(const Sample& y, double trim_fraction = 0.5);

Scaling median_mad_scaling(const Sample& y);
// Trimmed-mean location with the MAD taken around it.
Scaling trimmed_mad_scaling(const Sample& y, double trim_fraction = 0.5);

}  // namespace fdrlab
