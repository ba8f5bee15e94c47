#include "asrlab/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "asrlab/error.hpp"

namespace asrlab {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}

std::string make_header(std::uint32_t sample_rate, std::uint64_t frames) {
  const std::uint64_t data_bytes = frames * 2;
  if (data_bytes > 0xFFFFFFFFull - 36) throw InvalidArgument("audio too long for a WAV file");
  std::string h;
  h.reserve(44);
  h += "RIFF";
  put32(h, static_cast<std::uint32_t>(36 + data_bytes));
  h += "WAVEfmt ";
  put32(h, 16);
  put16(h, 1);  // PCM
  put16(h, 1);  // mono
  put32(h, sample_rate);
  put32(h, sample_rate * 2);
  put16(h, 2);
  put16(h, 16);
  h += "data";
  put32(h, static_cast<std::uint32_t>(data_bytes));
  return h;
}

// Walks chunks up to the data chunk; leaves the stream positioned at the
// first sample byte.
WavInfo parse_header(std::istream& in, const std::filesystem::path& path) {
  std::array<unsigned char, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size()) ||
      std::memcmp(riff.data(), "RIFF", 4) != 0 || std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
    throw ParseError("not a RIFF/WAVE file: " + path.string());
  }
  WavInfo info;
  bool have_fmt = false;
  for (;;) {
    std::array<unsigned char, 8> ch{};
    if (!in.read(reinterpret_cast<char*>(ch.data()), ch.size())) {
      throw ParseError("WAV file has no data chunk: " + path.string());
    }
    const std::uint32_t size = le32(ch.data() + 4);
    if (std::memcmp(ch.data(), "fmt ", 4) == 0) {
      if (size < 16) throw ParseError("WAV fmt chunk too short: " + path.string());
      std::vector<unsigned char> fmt(size);
      if (!in.read(reinterpret_cast<char*>(fmt.data()), size)) {
        throw ParseError("truncated WAV fmt chunk: " + path.string());
      }
      const std::uint16_t format = le16(fmt.data());
      if (format != 1 && format != 0xFFFE) {
        throw ParseError("unsupported WAV encoding (PCM only): " + path.string());
      }
      info.channels = le16(fmt.data() + 2);
      info.sample_rate = le32(fmt.data() + 4);
      info.bits_per_sample = le16(fmt.data() + 14);
      if (size & 1) in.ignore(1);
      have_fmt = true;
    } else if (std::memcmp(ch.data(), "data", 4) == 0) {
      if (!have_fmt) throw ParseError("WAV data chunk precedes fmt chunk: " + path.string());
      info.data_bytes = size;
      return info;
    } else {
      in.ignore(size + (size & 1));
    }
  }
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_header(in, path);
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const WavInfo info = parse_header(in, path);
  if (info.channels != 1 || info.bits_per_sample != 16) {
    throw ParseError("expected 16-bit mono PCM: " + path.string());
  }
  std::vector<unsigned char> raw(info.data_bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::uint64_t>(in.gcount()) != info.data_bytes) {
    throw ParseError("truncated WAV data: " + path.string());
  }
  AudioBuffer audio;
  audio.sample_rate = info.sample_rate;
  audio.samples.resize(raw.size() / 2);
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    const auto v = static_cast<std::int16_t>(le16(raw.data() + 2 * i));
    audio.samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return audio;
}

void write_wav(const AudioBuffer& audio, const std::filesystem::path& path) {
  std::string bytes = make_header(audio.sample_rate, audio.samples.size());
  bytes.reserve(bytes.size() + 2 * audio.samples.size());
  for (float s : audio.samples) {
    const double clipped = std::clamp(static_cast<double>(s), -1.0, 1.0);
    const long q = std::min(std::lround(clipped * 32768.0), 32767L);
    put16(bytes, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_wav_header_only(const std::filesystem::path& path, std::uint32_t sample_rate,
                           std::uint64_t frames) {
  const std::string header = make_header(sample_rate, frames);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
}

}  // namespace asrlab
