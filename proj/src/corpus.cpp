#include "asrlab/corpus.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "asrlab/error.hpp"
#include "asrlab/text.hpp"
#include "asrlab/wav.hpp"

namespace asrlab {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "?";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::primary: return "primary";
    case Source::speed_augm: return "speed_augm";
    case Source::external: return "external";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  throw InvalidArgument("unknown split '" + std::string(s) + "'");
}

Source parse_source(std::string_view s) {
  if (s == "primary") return Source::primary;
  if (s == "speed_augm") return Source::speed_augm;
  if (s == "external") return Source::external;
  throw InvalidArgument("unknown source '" + std::string(s) + "'");
}

double Manifest::total_seconds() const {
  double total = 0.0;
  for (const auto& u : entries) total += u.duration_s;
  return total;
}

Manifest read_manifest(const std::filesystem::path& path, Split split,
                       const ManifestReadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  Manifest m;
  m.split = split;
  m.source = opts.source;
  const auto base = path.parent_path();
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = text::split_fields(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("manifest " + path.string() + ": expected id<TAB>audio_path<TAB>transcript",
                       lineno);
    }
    Utterance u;
    u.id = std::string(fields[0]);
    u.audio_path = std::string(fields[1]);
    if (fields.size() == 3) u.transcript = std::string(fields[2]);
    if (u.id.empty()) throw ParseError("manifest " + path.string() + ": empty id", lineno);
    if (u.audio_path.empty()) {
      throw ParseError("manifest " + path.string() + ": empty audio path", lineno);
    }
    if (!seen.insert(u.id).second) {
      throw ParseError("manifest " + path.string() + ": duplicate id '" + u.id + "'", lineno);
    }
    std::filesystem::path audio(u.audio_path);
    if (audio.is_relative()) audio = base / audio;
    if (std::filesystem::exists(audio)) {
      u.duration_s = read_wav_info(audio).duration_s();
    } else if (opts.strict) {
      throw IoError("manifest " + path.string() + " line " + std::to_string(lineno) +
                    ": audio file not found: " + audio.string());
    }
    m.entries.push_back(std::move(u));
  }
  return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    for (const auto& u : m.entries) out << u.id << '\t' << u.audio_path << '\t' << u.transcript << '\n';
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SplitCell ManifestStats::cell(Split split, Source source) const {
  auto it = cells.find({split, source});
  return it == cells.end() ? SplitCell{} : it->second;
}

SplitCell ManifestStats::split_total(Split split) const {
  SplitCell c;
  for (const auto& [key, v] : cells)
    if (key.first == split) c += v;
  return c;
}

SplitCell ManifestStats::total() const {
  SplitCell c;
  for (const auto& [key, v] : cells) c += v;
  return c;
}

ManifestStats& ManifestStats::operator+=(const ManifestStats& o) {
  for (const auto& [key, v] : o.cells) cells[key] += v;
  return *this;
}

ManifestStats manifest_stats(const Manifest& m) {
  ManifestStats s;
  auto& c = s.cells[{m.split, m.source}];
  c.seconds = m.total_seconds();
  c.utterances = m.entries.size();
  return s;
}

ManifestStats manifest_stats(std::span<const Manifest> ms) {
  ManifestStats s;
  for (const auto& m : ms) s += manifest_stats(m);
  return s;
}

// ---------------------------------------------------------------------------
// Emission matrices

EmissionMatrix::EmissionMatrix(std::string utterance_id, std::vector<std::string> vocab,
                               std::size_t frames, std::vector<float> logprobs)
    : utterance_id_(std::move(utterance_id)),
      vocab_(std::move(vocab)),
      frames_(frames),
      logprobs_(std::move(logprobs)) {
  if (frames_ == 0) throw ParseError("emission matrix has zero frames");
  if (vocab_.empty()) throw ParseError("emission matrix has empty vocabulary");
  if (vocab_[0] != kBlank) throw ParseError("vocabulary index 0 must be the blank symbol <blank>");
  const auto ndelim = std::count(vocab_.begin(), vocab_.end(), std::string(kDelimiter));
  if (ndelim != 1) throw ParseError("vocabulary must contain the word delimiter exactly once");
  delimiter_ = static_cast<std::size_t>(
      std::find(vocab_.begin(), vocab_.end(), std::string(kDelimiter)) - vocab_.begin());
  if (logprobs_.size() != frames_ * vocab_.size()) {
    throw ParseError("emission data size does not match T x V");
  }
}

namespace {

double frame_logsumexp(std::span<const float> row) {
  double mx = -std::numeric_limits<double>::infinity();
  for (float v : row) mx = std::max(mx, static_cast<double>(v));
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (float v : row) s += std::exp(static_cast<double>(v) - mx);
  return mx + std::log(s);
}

std::uint32_t read_u32(std::string_view bytes, std::size_t off) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + off);
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

double EmissionMatrix::max_normalization_error() const {
  double worst = 0.0;
  for (std::size_t t = 0; t < frames_; ++t) {
    const double lse = frame_logsumexp(frame(t));
    worst = std::max(worst, std::isfinite(lse) ? std::abs(lse) : std::numeric_limits<double>::infinity());
  }
  return worst;
}

EmissionMatrix parse_emissions(std::string_view bytes, const EmissionReadOptions& opts) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != "EMX1") throw ParseError("bad EMX magic");
  const std::uint64_t frames = read_u32(bytes, 4);
  const std::uint64_t vsize = read_u32(bytes, 8);
  const std::uint64_t jlen = read_u32(bytes, 12);
  if (frames == 0) throw ParseError("EMX: T = 0");
  if (vsize == 0) throw ParseError("EMX: V = 0");
  if (16 + jlen > bytes.size()) throw ParseError("EMX: truncated JSON header");
  const std::uint64_t cells = frames * vsize;  // both < 2^32, cannot overflow u64
  const std::uint64_t payload = bytes.size() - 16 - jlen;
  if (cells > payload / 4 || cells * 4 != payload) {
    throw ParseError("EMX: T x V does not match payload size");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(16, jlen));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("EMX: invalid JSON header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("utterance_id") || !header.contains("vocab") ||
      !header["utterance_id"].is_string() || !header["vocab"].is_array()) {
    throw ParseError("EMX: header must carry utterance_id and vocab");
  }
  std::vector<std::string> vocab;
  for (const auto& v : header["vocab"]) {
    if (!v.is_string()) throw ParseError("EMX: vocab entries must be strings");
    vocab.push_back(v.get<std::string>());
  }
  if (vocab.size() != vsize) throw ParseError("EMX: vocab length differs from V");

  std::vector<float> data(cells);
  const char* p = bytes.data() + 16 + jlen;
  for (std::uint64_t i = 0; i < cells; ++i) {
    const std::uint32_t bits = read_u32(std::string_view(p, 4), 0);
    data[i] = std::bit_cast<float>(bits);
    p += 4;
  }
  const auto id = header["utterance_id"].get<std::string>();
  if (!opts.strict) {
    for (std::uint64_t t = 0; t < frames; ++t) {
      std::span<float> row(data.data() + t * vsize, vsize);
      const double lse = frame_logsumexp(row);
      if (!std::isfinite(lse)) throw ParseError("EMX: frame " + std::to_string(t) + " is not finite");
      for (float& v : row) v = static_cast<float>(static_cast<double>(v) - lse);
    }
  }
  EmissionMatrix m(id, std::move(vocab), frames, std::move(data));
  if (opts.strict) {
    for (std::size_t t = 0; t < m.frames(); ++t) {
      const double lse = frame_logsumexp(m.frame(t));
      if (!(std::abs(lse) <= 1e-4)) {
        throw ParseError("EMX: frame " + std::to_string(t) + " is not normalized (logsumexp " +
                         std::to_string(lse) + ")");
      }
    }
  }
  return m;
}

EmissionMatrix read_emissions(const std::filesystem::path& path, const EmissionReadOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_emissions(ss.view(), opts);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_emissions(const EmissionMatrix& m) {
  nlohmann::json header = {{"utterance_id", m.utterance_id()}, {"vocab", m.vocab()}};
  const std::string j = header.dump();
  std::string out;
  out.reserve(16 + j.size() + 4 * m.data().size());
  out += "EMX1";
  put_u32(out, static_cast<std::uint32_t>(m.frames()));
  put_u32(out, static_cast<std::uint32_t>(m.vocab_size()));
  put_u32(out, static_cast<std::uint32_t>(j.size()));
  out += j;
  for (float v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

void write_emissions(const EmissionMatrix& m, const std::filesystem::path& path) {
  const std::string bytes = serialize_emissions(m);
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

EmissionMatrix emissions_from_probs(std::string utterance_id, std::vector<std::string> vocab,
                                    const std::vector<std::vector<double>>& probs) {
  std::vector<float> data;
  data.reserve(probs.size() * vocab.size());
  for (const auto& row : probs) {
    if (row.size() != vocab.size()) throw InvalidArgument("probability row width differs from V");
    double z = 0.0;
    for (double p : row) z += p;
    for (double p : row) {
      data.push_back(p > 0.0 ? static_cast<float>(std::log(p / z))
                             : -std::numeric_limits<float>::infinity());
    }
  }
  return EmissionMatrix(std::move(utterance_id), std::move(vocab), probs.size(), std::move(data));
}

}  // namespace asrlab
