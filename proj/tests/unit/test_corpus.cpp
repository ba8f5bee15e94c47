#include <doctest.h>

#include <cmath>
#include <cstring>

#include "asrlab/corpus.hpp"
#include "asrlab/error.hpp"
#include "asrlab/wav.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace asrlab;
using asrlab::testing::ScratchDir;
using asrlab::testing::write_text;

TEST_CASE("empty manifest") {
  ScratchDir dir("corpus");
  write_text(dir / "m.tsv", "");
  const auto m = read_manifest(dir / "m.tsv", Split::train);
  CHECK(m.entries.empty());
  CHECK(m.total_hours() == 0.0);
  const auto s = manifest_stats(m);
  CHECK(s.total().seconds == 0.0);
  CHECK(s.total().utterances == 0);
}

TEST_CASE("durations come from wav headers") {
  ScratchDir dir("corpus");
  std::string tsv;
  for (int i = 0; i < 3; ++i) {
    const auto name = "u" + std::to_string(i) + ".wav";
    write_wav_header_only(dir / name, 16000, 16000ull * 3600);
    tsv += "u" + std::to_string(i) + "\t" + name + "\tsome words\n";
  }
  write_text(dir / "m.tsv", tsv);
  const auto m = read_manifest(dir / "m.tsv", Split::train);
  REQUIRE(m.entries.size() == 3);
  CHECK(m.total_hours() == doctest::Approx(3.0));
  CHECK(m.entries[1].audio_path == "u1.wav");
  CHECK(m.entries[2].transcript == "some words");
}

TEST_CASE("Bribri-sized train split totals 0.49 h") {
  ScratchDir dir("corpus");
  // 0.49 h split into 7 utterances of 252 s
  std::string tsv;
  for (int i = 0; i < 7; ++i) {
    const auto name = "b" + std::to_string(i) + ".wav";
    write_wav_header_only(dir / name, 16000, 16000ull * 252);
    tsv += "b" + std::to_string(i) + "\t" + name + "\t\n";
  }
  write_text(dir / "m.tsv", tsv);
  const auto m = read_manifest(dir / "m.tsv", Split::train);
  CHECK(std::abs(m.total_hours() - 0.49) <= 0.005);
}

TEST_CASE("manifest errors report line numbers") {
  ScratchDir dir("corpus");
  write_text(dir / "bad.tsv", "a\tx.wav\thi\n\njust-one-field\n");
  try {
    read_manifest(dir / "bad.tsv", Split::dev, {Source::primary, false});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  write_text(dir / "dup.tsv", "a\tx.wav\thi\nb\ty.wav\t\na\tz.wav\t\n");
  try {
    read_manifest(dir / "dup.tsv", Split::dev, {Source::primary, false});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }
}

TEST_CASE("missing audio: strict error, lenient zero duration") {
  ScratchDir dir("corpus");
  write_text(dir / "m.tsv", "a\tnowhere.wav\thello\n");
  CHECK_THROWS_AS(read_manifest(dir / "m.tsv", Split::test), IoError);
  const auto m = read_manifest(dir / "m.tsv", Split::test, {Source::external, false});
  REQUIRE(m.entries.size() == 1);
  CHECK(m.entries[0].duration_s == 0.0);
  CHECK(m.source == Source::external);
}

TEST_CASE("manifest write then read preserves entries") {
  ScratchDir dir("corpus");
  Manifest m;
  m.entries = {{"x", "x.wav", "uno dos", 0.0}, {"y", "y.wav", "", 0.0}};
  write_manifest(m, dir / "m.tsv");
  const auto r = read_manifest(dir / "m.tsv", Split::train, {Source::primary, false});
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].transcript == "uno dos");
  CHECK(r.entries[1].id == "y");
}

TEST_CASE("manifest_stats arithmetic and additivity") {
  Manifest a;
  a.entries = {{"1", "1.wav", "", 1800}, {"2", "2.wav", "", 1800}};
  auto sa = manifest_stats(a);
  CHECK(sa.total().hours() == doctest::Approx(1.0));
  CHECK(sa.total().utterances == 2);

  Manifest b;
  b.source = Source::speed_augm;
  b.entries = {{"1#sp0.9", "1.wav", "", 2000}};
  Manifest c;
  c.source = Source::external;
  c.entries = {{"e", "e.wav", "", 400}, {"f", "f.wav", "", 500}};
  Manifest d;
  d.split = Split::dev;
  d.entries = {{"d", "d.wav", "", 60}};

  const std::vector<Manifest> all{a, b, c, d};
  const auto s = manifest_stats(all);
  CHECK(s.cell(Split::train, Source::primary).seconds == 3600);
  CHECK(s.cell(Split::train, Source::speed_augm).seconds == 2000);
  CHECK(s.cell(Split::train, Source::external).utterances == 2);
  CHECK(s.split_total(Split::train).seconds == 3600 + 2000 + 900);
  CHECK(s.split_total(Split::dev).utterances == 1);
  CHECK(s.split_total(Split::test).utterances == 0);

  ManifestStats sum;
  for (const auto& m : all) sum += manifest_stats(m);
  CHECK(sum.total().seconds == s.total().seconds);
  CHECK(sum.total().utterances == s.total().utterances);
}

TEST_CASE("EMX round trip is bit-identical for random matrices") {
  ScratchDir dir("corpus");
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto em = testing::random_emissions(rng, 1 + rng.below(7), 2 + rng.below(5));
    const auto bytes = serialize_emissions(em);
    const auto back = parse_emissions(bytes);
    REQUIRE(serialize_emissions(back) == bytes);
    REQUIRE(back.data() == em.data());
  }
  const auto em = testing::random_emissions(rng, 5, 4);
  write_emissions(em, dir / "x.emx");
  const auto back = read_emissions(dir / "x.emx");
  CHECK(std::memcmp(back.data().data(), em.data().data(), em.data().size() * sizeof(float)) == 0);
  CHECK(back.utterance_id() == em.utterance_id());
  CHECK(back.vocab() == em.vocab());
  CHECK(back.max_normalization_error() <= 1e-4);
}

namespace {

std::string emx(std::uint32_t t, std::uint32_t v, const std::string& json, const std::vector<float>& data) {
  std::string out = "EMX1";
  auto u32 = [&](std::uint32_t x) { for (int i = 0; i < 4; ++i) out += static_cast<char>((x >> (8 * i)) & 0xFF); };
  u32(t);
  u32(v);
  u32(static_cast<std::uint32_t>(json.size()));
  out += json;
  for (float f : data) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    u32(bits);
  }
  return out;
}

}  // namespace

TEST_CASE("EMX errors") {
  const std::string hdr = R"({"utterance_id":"u","vocab":["<blank>"," ","a"]})";
  const float l = static_cast<float>(std::log(1.0 / 3.0));
  CHECK_NOTHROW(parse_emissions(emx(1, 3, hdr, {l, l, l})));

  auto bad = emx(1, 3, hdr, {l, l, l});
  bad[0] = 'X';
  CHECK_THROWS_AS(parse_emissions(bad), ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(0, 3, hdr, {})), ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(2, 3, hdr, {l, l, l})), ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(0xFFFFFFFF, 0xFFFFFFFF, hdr, {l, l, l})), ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(1, 3, R"({"utterance_id":"u","vocab":["a"," ","<blank>"]})", {l, l, l})),
                  ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(1, 3, R"({"utterance_id":"u","vocab":["<blank>","a","b"]})", {l, l, l})),
                  ParseError);
  CHECK_THROWS_AS(parse_emissions(emx(1, 3, "{not json", {l, l, l})), ParseError);

  // logsumexp = 0.5
  const float s = l + 0.5f;
  CHECK_THROWS_AS(parse_emissions(emx(1, 3, hdr, {s, s, s})), ParseError);
  const auto lenient = parse_emissions(emx(1, 3, hdr, {s, s, s}), {false});
  CHECK(lenient.max_normalization_error() <= 1e-6);
  CHECK(lenient.at(0, 2) == doctest::Approx(l).epsilon(1e-6));
}

TEST_CASE("emissions_from_probs renormalizes rows") {
  const auto em = emissions_from_probs("u", {"<blank>", " ", "a"}, {{2, 1, 1}, {0, 0, 5}});
  CHECK(em.frames() == 2);
  CHECK(em.delimiter_index() == 1);
  CHECK(std::exp(em.at(0, 0)) == doctest::Approx(0.5));
  CHECK(std::exp(em.at(1, 2)) == doctest::Approx(1.0));
  CHECK(em.max_normalization_error() <= 1e-6);
}
