#include "asrlab/sobol_sequence.hpp"

#include <array>
#include <bit>

#include "asrlab/error.hpp"
#include "asrlab/rng.hpp"

namespace asrlab {

namespace {

struct Primitive {
  int s;
  std::uint32_t a;
  std::array<std::uint32_t, 8> m;
};

// Dimensions 2..21 of the new-joe-kuo-6.21201 table.
constexpr std::array<Primitive, SobolSequence::kMaxDims - 1> kJoeKuo{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr int B = SobolSequence::kBits;

}  // namespace

SobolSequence::SobolSequence(std::size_t dims, bool scramble, std::uint64_t seed)
    : dims_(dims), v_(dims * B), shift_(dims, 0) {
  if (dims == 0 || dims > kMaxDims) throw InvalidArgument("Sobol' dimension must be in [1, 21]");
  for (int k = 0; k < B; ++k) v_[static_cast<std::size_t>(k)] = 1u << (B - 1 - k);
  for (std::size_t d = 1; d < dims; ++d) {
    const auto& p = kJoeKuo[d - 1];
    std::uint32_t* v = &v_[d * B];
    for (int k = 0; k < p.s; ++k) v[k] = p.m[static_cast<std::size_t>(k)] << (B - 1 - k);
    for (int k = p.s; k < B; ++k) {
      std::uint32_t x = v[k - p.s] ^ (v[k - p.s] >> p.s);
      for (int j = 1; j < p.s; ++j) {
        if ((p.a >> (p.s - 1 - j)) & 1u) x ^= v[k - j];
      }
      v[k] = x;
    }
  }
  if (!scramble) return;

  Rng rng(seed);
  for (std::size_t d = 0; d < dims; ++d) {
    // Lower-triangular matrix with unit diagonal in digit order (most
    // significant digit first). Row r is a mask over digits 0..r.
    std::array<std::uint32_t, B> rows{};
    for (int r = 0; r < B; ++r) {
      const std::uint32_t own = 1u << (B - 1 - r);
      const std::uint32_t above = r == 0 ? 0u : ~((1u << (B - r)) - 1u);
      rows[static_cast<std::size_t>(r)] = own | (rng.next_u32() & above);
    }
    std::uint32_t* v = &v_[d * B];
    for (int k = 0; k < B; ++k) {
      std::uint32_t out = 0;
      for (int r = 0; r < B; ++r) {
        if (std::popcount(v[k] & rows[static_cast<std::size_t>(r)]) & 1) out |= 1u << (B - 1 - r);
      }
      v[k] = out;
    }
    shift_[d] = rng.next_u32();
  }
}

void SobolSequence::point(std::uint64_t index, double* out) const {
  constexpr double scale = 1.0 / 4294967296.0;
  for (std::size_t d = 0; d < dims_; ++d) {
    std::uint32_t x = shift_[d];
    std::uint64_t i = index ^ (index >> 1);  // Gray-code order
    for (int k = 0; i != 0; ++k, i >>= 1) {
      if (i & 1u) x ^= v_[d * B + static_cast<std::size_t>(k)];
    }
    out[d] = x * scale;
  }
}

std::vector<double> SobolSequence::first(std::size_t n) const {
  if (n > (std::uint64_t{1} << B)) throw InvalidArgument("too many Sobol' points requested");
  std::vector<double> pts(n * dims_);
  for (std::size_t i = 0; i < n; ++i) point(i, &pts[i * dims_]);
  return pts;
}

}  // namespace asrlab
