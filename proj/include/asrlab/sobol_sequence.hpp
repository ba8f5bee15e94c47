#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace asrlab {

// Sobol' low-discrepancy points in [0, 1)^dims with Joe-Kuo direction
// numbers, optionally randomized by a linear matrix scramble and a digital
// shift drawn from `seed`.
class SobolSequence {
 public:
  static constexpr std::size_t kMaxDims = 21;
  static constexpr int kBits = 32;

  SobolSequence(std::size_t dims, bool scramble, std::uint64_t seed = 0);

  std::size_t dims() const { return dims_; }
  // Point with the given index (0-based; point 0 is the origin when
  // unscrambled). Writes dims() coordinates.
  void point(std::uint64_t index, double* out) const;
  // First n points, row-major n x dims().
  std::vector<double> first(std::size_t n) const;

 private:
  std::size_t dims_;
  std::vector<std::uint32_t> v_;      // dims x kBits direction numbers
  std::vector<std::uint32_t> shift_;  // per dimension
};

}  // namespace asrlab
