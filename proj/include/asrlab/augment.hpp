#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "asrlab/corpus.hpp"
#include "asrlab/wav.hpp"

namespace asrlab {

inline constexpr double kMinSpeedFactor = 0.5;
inline constexpr double kMaxSpeedFactor = 2.0;

// Kaiser-windowed sinc interpolator for reading a signal at fractional
// positions spaced `factor` input samples apart. The cutoff is
// min(1, 1/factor) of Nyquist. Fractional positions are quantized to
// 1/kPhases of a sample and each phase has its own precomputed taps.
class ResampleFilter {
 public:
  static constexpr int kZeroCrossings = 16;
  static constexpr double kBeta = 8.6;
  static constexpr std::size_t kPhases = 4096;

  explicit ResampleFilter(double factor);

  double factor() const { return factor_; }
  std::size_t output_length(std::size_t input_length) const;
  // Taps for phase p apply to input samples first_offset() + j relative to
  // floor(position).
  std::span<const float> taps(std::size_t phase) const {
    return {bank_.data() + phase * width_, width_};
  }
  long first_offset() const { return first_; }

  // Output sample n: sum of taps(phase) * input[base + first_offset() + j].
  void locate(std::size_t n, long& base, std::size_t& phase) const;

 private:
  double factor_;
  long first_ = 0;
  std::size_t width_ = 0;
  std::vector<float> bank_;
};

// Resampling speed change: duration scales by 1/factor, frequencies by
// factor. Output length round(len / factor).
AudioBuffer speed_perturb(const AudioBuffer& audio, double factor);

// "#sp0.9" style suffix for augmented copies.
std::string speed_suffix(double factor);

struct AugmentOptions {
  // Accept manifests whose source is not primary.
  bool allow_non_primary = false;
};

// Writes one perturbed copy of every entry per factor into `out_dir` and
// returns the manifest of the copies (source speed_augm), entry-major.
Manifest augment_manifest(const Manifest& m, std::span<const double> factors,
                          const std::filesystem::path& audio_root,
                          const std::filesystem::path& out_dir, const AugmentOptions& opts = {});

}  // namespace asrlab
