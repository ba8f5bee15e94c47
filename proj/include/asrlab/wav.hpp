#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace asrlab {

// Mono PCM audio with samples normalized to [-1, 1].
struct AudioBuffer {
  std::uint32_t sample_rate = 16000;
  std::vector<float> samples;

  double duration_s() const {
    return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct WavInfo {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  std::uint64_t data_bytes = 0;

  std::uint64_t frames() const {
    const std::uint64_t frame_bytes = std::uint64_t{channels} * (bits_per_sample / 8);
    return frame_bytes ? data_bytes / frame_bytes : 0;
  }
  double duration_s() const {
    return sample_rate ? static_cast<double>(frames()) / sample_rate : 0.0;
  }
};

// Reads only the RIFF header chunks; the data chunk size is taken from its
// header, so a file may be truncated after the header.
WavInfo read_wav_info(const std::filesystem::path& path);

// Reads 16-bit PCM mono audio.
AudioBuffer read_wav(const std::filesystem::path& path);

// Writes 16-bit PCM mono, clipping to [-1, 1]. The file is written to a
// temporary sibling and renamed into place.
void write_wav(const AudioBuffer& audio, const std::filesystem::path& path);

// Writes a 16-bit mono header that declares `frames` samples without any
// sample payload. Used for duration-only fixtures.
void write_wav_header_only(const std::filesystem::path& path, std::uint32_t sample_rate,
                           std::uint64_t frames);

}  // namespace asrlab
