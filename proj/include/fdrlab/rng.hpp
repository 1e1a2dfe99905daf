#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace fdrlab {

// Counter-based generator (Philox4x32-10). The output is a pure function of
// (seed, stream, position), so derived streams are reproducible on any
// platform and independent of evaluation order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  // Uniform on the open interval (0,1), 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal by inversion of the uniform draw.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  // An independent stream keyed by (seed, stream, tag).
  RandomStream derive(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
};

}  // namespace fdrlab
