#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asrlab {

enum class Split { train, dev, test };
enum class Source { primary, speed_augm, external };

std::string_view to_string(Split s);
std::string_view to_string(Source s);
Split parse_split(std::string_view s);
Source parse_source(std::string_view s);

struct Utterance {
  std::string id;
  std::string audio_path;
  std::string transcript;
  double duration_s = 0.0;
};

struct Manifest {
  Split split = Split::train;
  Source source = Source::primary;
  std::vector<Utterance> entries;

  double total_seconds() const;
  double total_hours() const { return total_seconds() / 3600.0; }
};

struct ManifestReadOptions {
  Source source = Source::primary;
  // A missing audio file is an error when strict, duration 0 otherwise.
  bool strict = true;
};

// Reads `id<TAB>audio_path<TAB>transcript` lines. Relative audio paths are
// resolved against the manifest's directory when probing durations, but are
// stored as written.
Manifest read_manifest(const std::filesystem::path& path, Split split,
                       const ManifestReadOptions& opts = {});

void write_manifest(const Manifest& m, const std::filesystem::path& path);

struct SplitCell {
  double seconds = 0.0;
  std::size_t utterances = 0;

  double hours() const { return seconds / 3600.0; }
  SplitCell& operator+=(const SplitCell& o) {
    seconds += o.seconds;
    utterances += o.utterances;
    return *this;
  }
};

// Duration and count totals keyed by (split, source), the accounting used
// for per-language data tables.
struct ManifestStats {
  std::map<std::pair<Split, Source>, SplitCell> cells;

  SplitCell cell(Split split, Source source) const;
  SplitCell split_total(Split split) const;
  SplitCell total() const;

  ManifestStats& operator+=(const ManifestStats& o);
};

ManifestStats manifest_stats(const Manifest& m);
ManifestStats manifest_stats(std::span<const Manifest> ms);

// T x V frame-level natural-log probabilities. Index 0 is the blank.
class EmissionMatrix {
 public:
  static constexpr std::string_view kBlank = "<blank>";
  static constexpr std::string_view kDelimiter = " ";

  EmissionMatrix() = default;
  // Validates the vocabulary convention and shape; does not check frame
  // normalization (see read_emissions / check_normalized).
  EmissionMatrix(std::string utterance_id, std::vector<std::string> vocab, std::size_t frames,
                 std::vector<float> logprobs);

  const std::string& utterance_id() const { return utterance_id_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t frames() const { return frames_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  std::size_t delimiter_index() const { return delimiter_; }

  std::span<const float> frame(std::size_t t) const {
    return {logprobs_.data() + t * vocab_.size(), vocab_.size()};
  }
  float at(std::size_t t, std::size_t v) const { return logprobs_[t * vocab_.size() + v]; }
  const std::vector<float>& data() const { return logprobs_; }

  // Largest |logsumexp(frame) - 0| over all frames.
  double max_normalization_error() const;

 private:
  std::string utterance_id_;
  std::vector<std::string> vocab_;
  std::size_t frames_ = 0;
  std::size_t delimiter_ = 0;
  std::vector<float> logprobs_;
};

struct EmissionReadOptions {
  // Strict: reject frames whose logsumexp deviates from 0 by more than
  // 1e-4. Non-strict: apply log-softmax to every frame.
  bool strict = true;
};

EmissionMatrix read_emissions(const std::filesystem::path& path,
                              const EmissionReadOptions& opts = {});
EmissionMatrix parse_emissions(std::string_view bytes, const EmissionReadOptions& opts = {});

void write_emissions(const EmissionMatrix& m, const std::filesystem::path& path);
std::string serialize_emissions(const EmissionMatrix& m);

// Builds a matrix from per-frame probabilities (linear domain, each row is
// renormalized). Convenience for fixtures and tests.
EmissionMatrix emissions_from_probs(std::string utterance_id, std::vector<std::string> vocab,
                                    const std::vector<std::vector<double>>& probs);

}  // namespace asrlab
