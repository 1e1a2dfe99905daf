#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdrlab/distributions.hpp"
#include "fdrlab/sample.hpp"

namespace fdrlab {

// Two-sided p-values p_i = 2 Gbar(|Y_i - u| / s) of the data under the
// candidate scaling (u, s). s may be +infinity (all p-values equal 1).
struct PValueVector {
  std::vector<double> p;
  double u = 0.0;
  double s = 1.0;
};

// Indices are 0-based and ascending.
struct RejectionSet {
  std::vector<std::size_t> indices;
  double threshold = 0.0;  // realized step-up threshold T_alpha = alpha * k / n
  double alpha = 0.0;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(std::size_t i) const;
};

// Only the family shape of `shape` is used (its standardized tail); its own
// location and scale are ignored. Location families are used with s == 1.
// Throws DegenerateScaleError for s == 0.
PValueVector rescaled_pvalues(const Sample& y, double u, double s,
                              const NullModel& shape = NullModel::gaussian());

// Exact step-up comparison p * n <= alpha * k, carried out in extended
// precision so that p == alpha * k / n is never misclassified by rounding.
bool at_or_below_step(double p, double alpha, std::size_t k, std::size_t n);

// Largest k with p_(k) <= alpha k / n (0 if none).
std::size_t step_up_count(std::span<const double> p, double alpha);

// T_alpha = max{t in [0,1] : #{p_i <= t} >= n t / alpha} = alpha * k_hat / n.
double bh_threshold(std::span<const double> p, double alpha);
double bh_threshold(const PValueVector& p, double alpha);

// {i : p_i <= T_alpha v (alpha / n)} on an arbitrary p-value vector.
RejectionSet bh_reject(std::span<const double> p, double alpha);

RejectionSet bh_procedure(const Sample& y, double u, double s, double alpha,
                          const NullModel& shape = NullModel::gaussian());

// |R ∩ H0| / (|R| v 1). The index set may be in any order.
double fdp(const RejectionSet& rejections, std::span<const std::size_t> h0);
// |R ∩ H1| / (|H1| v 1).
double tdp(const RejectionSet& rejections, std::span<const std::size_t> h1);

// I_t(x, y) = 2 Phibar(Phibar^{-1}(t/2) - x - y Phibar^{-1}(t/2)), capped at 1.
// t in [0,1), x, y >= 0.
double perturbation_envelope(double t, double x, double y);

}  // namespace fdrlab
