#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fdrlab {

// Observations together with their ascending order statistics.
class Sample {
 public:
  explicit Sample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const double> sorted() const { return sorted_; }

  // Y_(k) for k in 1..n.
  double order_statistic(std::size_t k) const;

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
};

}  // namespace fdrlab
