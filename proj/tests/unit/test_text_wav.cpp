#include <doctest.h>

#include <cmath>
#include <fstream>

#include "asrlab/error.hpp"
#include "asrlab/text.hpp"
#include "asrlab/wav.hpp"
#include "fixtures.hpp"

using namespace asrlab;
using asrlab::testing::ScratchDir;

TEST_CASE("utf8 decode and encode") {
  const std::string s = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80";  // a é € 😀
  const auto cps = text::to_u32(s);
  REQUIRE(cps.size() == 4);
  CHECK(cps[1] == U'é');
  CHECK(cps[2] == U'€');
  CHECK(cps[3] == U'\U0001F600');
  CHECK(text::to_utf8(cps) == s);
}

TEST_CASE("ill-formed utf8 becomes replacement characters") {
  CHECK(text::to_u32("\xFF") == std::u32string{U'�'});
  CHECK(text::to_u32("a\xC3") == std::u32string{U'a', U'�'});
  // Overlong encoding of '/'
  const auto over = text::to_u32("\xC0\xAF");
  CHECK(over.size() == 2);
  CHECK(over[0] == U'�');
  // Surrogate half
  CHECK(text::to_u32("\xED\xA0\x80").front() == U'�');
}

TEST_CASE("word and field splitting") {
  CHECK(text::split_words("  the  cat\tsat \n") == std::vector<std::string>{"the", "cat", "sat"});
  CHECK(text::split_words("   ").empty());
  const auto f = text::split_fields("a\t\tb\t", '\t');
  REQUIRE(f.size() == 4);
  CHECK(f[1].empty());
  CHECK(f[3].empty());
  CHECK(text::trim("  x y  ") == "x y");
}

TEST_CASE("wav round trip within one quantization step") {
  ScratchDir dir("wav");
  AudioBuffer a;
  for (int i = 0; i < 1000; ++i) a.samples.push_back(static_cast<float>(0.8 * std::sin(i * 0.01)));
  write_wav(a, dir / "a.wav");
  const auto b = read_wav(dir / "a.wav");
  CHECK(b.sample_rate == 16000);
  REQUIRE(b.samples.size() == a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(std::abs(a.samples[i] - b.samples[i]) <= 0.5 / 32768 + 1e-9);
  const auto info = read_wav_info(dir / "a.wav");
  CHECK(info.channels == 1);
  CHECK(info.bits_per_sample == 16);
  CHECK(info.frames() == 1000);
}

TEST_CASE("wav writer clips") {
  ScratchDir dir("wav");
  AudioBuffer a;
  a.samples = {2.0f, -3.0f};
  write_wav(a, dir / "c.wav");
  const auto b = read_wav(dir / "c.wav");
  CHECK(b.samples[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(b.samples[1] == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("header-only wav reports its declared duration") {
  ScratchDir dir("wav");
  write_wav_header_only(dir / "h.wav", 16000, 16000ull * 3600);
  CHECK(read_wav_info(dir / "h.wav").duration_s() == doctest::Approx(3600.0));
  CHECK(std::filesystem::file_size(dir / "h.wav") == 44);
}

TEST_CASE("wav errors") {
  ScratchDir dir("wav");
  asrlab::testing::write_text(dir / "junk.wav", "not audio at all, just text");
  CHECK_THROWS_AS(read_wav_info(dir / "junk.wav"), ParseError);
  CHECK_THROWS_AS(read_wav(dir / "missing.wav"), IoError);

  // 16-bit stereo header
  std::string h = "RIFF";
  auto u32 = [&](std::uint32_t v) { for (int i = 0; i < 4; ++i) h += static_cast<char>((v >> (8 * i)) & 0xFF); };
  auto u16 = [&](std::uint16_t v) { h += static_cast<char>(v & 0xFF); h += static_cast<char>(v >> 8); };
  u32(36 + 8);
  h += "WAVEfmt ";
  u32(16); u16(1); u16(2); u32(16000); u32(64000); u16(4); u16(16);
  h += "data";
  u32(8);
  h += std::string(8, '\0');
  asrlab::testing::write_text(dir / "stereo.wav", h);
  CHECK(read_wav_info(dir / "stereo.wav").channels == 2);
  CHECK_THROWS_AS(read_wav(dir / "stereo.wav"), ParseError);
}
