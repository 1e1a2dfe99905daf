#include "fdrlab/sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdrlab/errors.hpp"

namespace fdrlab {

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("sample: at least one observation is required");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ConfigError("sample: observation " + std::to_string(i + 1) + " is not finite");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double Sample::order_statistic(std::size_t k) const {
  if (k < 1 || k > sorted_.size()) {
    throw DomainError("order statistic index " + std::to_string(k) + " outside 1.." +
                      std::to_string(sorted_.size()));
  }
  return sorted_[k - 1];
}

}  // namespace fdrlab
