#include "asrlab/augment.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "asrlab/error.hpp"
#include "asrlab/kernels.hpp"

namespace asrlab {

namespace {

// Modified Bessel function of the first kind, order 0 (power series).
double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500 && term > 1e-17 * sum; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double kaiser(double u, double beta, double norm) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return bessel_i0(beta * std::sqrt(1.0 - u * u)) / norm;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

void check_factor(double factor) {
  if (!(factor >= kMinSpeedFactor && factor <= kMaxSpeedFactor)) {
    throw InvalidArgument("speed factor must lie in [0.5, 2.0]");
  }
}

}  // namespace

ResampleFilter::ResampleFilter(double factor) : factor_(factor) {
  check_factor(factor);
  const double fc = std::min(1.0, 1.0 / factor);
  const double half = kZeroCrossings / fc;  // support radius in input samples
  const long reach = static_cast<long>(std::ceil(half));
  first_ = -reach + 1;
  width_ = static_cast<std::size_t>(2 * reach);
  bank_.assign(kPhases * width_, 0.0f);
  const double norm = bessel_i0(kBeta);
  for (std::size_t p = 0; p < kPhases; ++p) {
    const double frac = static_cast<double>(p) / kPhases;
    for (std::size_t j = 0; j < width_; ++j) {
      const double d = frac - static_cast<double>(first_ + static_cast<long>(j));
      bank_[p * width_ + j] = static_cast<float>(fc * sinc(fc * d) * kaiser(d / half, kBeta, norm));
    }
  }
}

std::size_t ResampleFilter::output_length(std::size_t n) const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n) / factor_));
}

void ResampleFilter::locate(std::size_t n, long& base, std::size_t& phase) const {
  const double x = static_cast<double>(n) * factor_;
  double whole = std::floor(x);
  auto p = static_cast<std::size_t>(std::llround((x - whole) * kPhases));
  if (p == kPhases) {
    p = 0;
    whole += 1.0;
  }
  base = static_cast<long>(whole);
  phase = p;
}

AudioBuffer speed_perturb(const AudioBuffer& audio, double factor) {
  check_factor(factor);
  AudioBuffer out;
  out.sample_rate = audio.sample_rate;
  if (audio.samples.empty()) return out;
  const ResampleFilter filter(factor);
  out.samples = kernels::resample(audio.samples, filter);
  return out;
}

std::string speed_suffix(double factor) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, factor);
  return "#sp" + std::string(buf, end);
}

Manifest augment_manifest(const Manifest& m, std::span<const double> factors,
                          const std::filesystem::path& audio_root, const std::filesystem::path& out_dir,
                          const AugmentOptions& opts) {
  if (m.source != Source::primary && !opts.allow_non_primary) {
    throw InvalidArgument("speed augmentation applies to the primary source only");
  }
  for (double f : factors) check_factor(f);

  Manifest out;
  out.split = m.split;
  out.source = Source::speed_augm;
  if (factors.empty()) return out;
  std::filesystem::create_directories(out_dir);

  const std::size_t nf = factors.size();
  out.entries.resize(m.entries.size() * nf);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    for (std::size_t k = 0; k < nf; ++k) {
      const auto& src = m.entries[i];
      auto& dst = out.entries[i * nf + k];
      dst.id = src.id + speed_suffix(factors[k]);
      dst.transcript = src.transcript;
      std::string file = dst.id;
      for (char& c : file) {
        if (c == '/' || c == '\\') c = '_';
      }
      dst.audio_path = file + ".wav";
    }
  }

  std::vector<ResampleFilter> filters;
  filters.reserve(nf);
  for (double f : factors) filters.emplace_back(f);

  kernels::parallel_for(m.entries.size(), [&](std::size_t i) {
    std::filesystem::path in = m.entries[i].audio_path;
    if (in.is_relative()) in = audio_root / in;
    const AudioBuffer audio = read_wav(in);
    for (std::size_t k = 0; k < nf; ++k) {
      AudioBuffer res;
      res.sample_rate = audio.sample_rate;
      if (!audio.samples.empty()) res.samples = kernels::resample_serial(audio.samples, filters[k]);
      auto& dst = out.entries[i * nf + k];
      write_wav(res, out_dir / dst.audio_path);
      dst.duration_s = res.duration_s();
    }
  });
  return out;
}

}  // namespace asrlab
