#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asrlab/normalize.hpp"

namespace asrlab {

enum class LmLevel { word, character };

// Token used for the word delimiter in character-level models.
inline constexpr std::string_view kCharDelimiterToken = "<sp>";

// Splits a line into LM tokens. Word level: whitespace split. Character
// level: one token per code point, whitespace runs become a single
// kCharDelimiterToken.
std::vector<std::string> tokenize(std::string_view line, LmLevel level);

// Reads a text file into token lines, skipping blank lines. When `norm` is
// given every line is normalized before tokenization.
std::vector<std::vector<std::string>> read_token_lines(
    const std::filesystem::path& path, LmLevel level,
    const std::optional<NormalizationConfig>& norm = std::nullopt);

using WordId = std::uint32_t;
inline constexpr int kMaxLmOrder = 6;

// Scoring context: the most recent words, oldest first.
struct LmState {
  std::array<WordId, kMaxLmOrder - 1> words{};
  std::uint8_t length = 0;

  std::span<const WordId> context() const { return {words.data(), length}; }
  friend bool operator==(const LmState& a, const LmState& b) {
    return a.length == b.length &&
           std::equal(a.words.begin(), a.words.begin() + a.length, b.words.begin());
  }
};

struct NgramEntry {
  double log10_prob = 0.0;
  double log10_backoff = 0.0;  // always 0 at the highest order
};

struct WordScore {
  double log10_prob = 0.0;
  LmState next;
  // Number of n-gram probability probes performed (at most the order).
  int probes = 0;
};

struct NgramKeyHash {
  std::size_t operator()(const std::vector<WordId>& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (WordId w : k) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Backoff n-gram model with log10 probabilities, as exchanged in ARPA files.
// Immutable once built; safe to share across threads.
class ArpaLanguageModel {
 public:
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kEos = "</s>";
  static constexpr std::string_view kUnk = "<unk>";

  using Table = std::unordered_map<std::vector<WordId>, NgramEntry, NgramKeyHash>;

  int order() const { return static_cast<int>(tables_.size()); }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t vocab_size() const { return words_.size(); }

  std::optional<WordId> find(std::string_view word) const;
  // Out-of-vocabulary words map to <unk>.
  WordId id_or_unk(std::string_view word) const;
  WordId bos() const { return bos_; }
  WordId eos() const { return eos_; }
  WordId unk() const { return unk_; }

  // k = ngram.size(), 1 <= k <= order.
  const NgramEntry* lookup(std::span<const WordId> ngram) const;
  const NgramEntry* lookup(std::span<const std::string> ngram) const;
  const Table& table(int k) const { return tables_.at(static_cast<std::size_t>(k - 1)); }
  std::size_t count(int k) const { return table(k).size(); }

  // N-grams of order k in a deterministic order (lexicographic by word id).
  std::vector<std::vector<WordId>> sorted_ngrams(int k) const;

  LmState begin_sentence() const;
  LmState null_state() const { return {}; }

  WordScore score_word(const LmState& state, WordId word) const;
  WordScore score_word(const LmState& state, std::string_view word) const {
    return score_word(state, id_or_unk(word));
  }
  // log10 P(</s> | state).
  double score_end(const LmState& state) const { return score_word(state, eos_).log10_prob; }

  // Sum of log10 probabilities of the tokens and </s>, starting from <s>.
  double score_sentence(std::span<const std::string> tokens) const;

  // Checks the structural invariants: every k-gram's (k-1)-gram prefix and
  // suffix are present and probabilities are <= 0. Throws on violation.
  void validate() const;

 private:
  friend class ArpaBuilder;

  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
  std::vector<Table> tables_;
  WordId bos_ = 0, eos_ = 0, unk_ = 0;
};

// Assembles a model entry by entry. Used by the trainer, the ARPA reader
// and tests that need hand-built models.
class ArpaBuilder {
 public:
  explicit ArpaBuilder(int order);

  WordId intern(std::string_view word);
  void set(std::span<const WordId> ngram, NgramEntry entry);
  void set(std::span<const std::string> ngram, NgramEntry entry);
  bool contains(std::span<const WordId> ngram) const;
  // Adds <s>, </s>, <unk> when absent (<s> at log10 -99, <unk> at the floor).
  ArpaLanguageModel build() &&;

  // Read access while building, for the trainer's recursive interpolation.
  const ArpaLanguageModel& partial() const { return lm_; }

 private:
  ArpaLanguageModel lm_;
};

struct DiscountConfig {
  enum class Mode { modified, fixed };
  Mode mode = Mode::modified;
  // Used for every count class in fixed mode, and as the fallback when
  // count-of-counts are too sparse for the modified estimates.
  double fixed_discount = 0.75;
};

// Per-order discounts actually used for counts 1, 2 and 3+.
struct OrderDiscounts {
  std::array<double, 3> d{0.75, 0.75, 0.75};
  bool fell_back = false;
};

// Interpolated (modified) Kneser-Ney estimation.
ArpaLanguageModel train(std::span<const std::vector<std::string>> sentences, int order,
                        const DiscountConfig& discounting = {});

// Same, also reporting the discounts chosen per order (index k-1).
ArpaLanguageModel train(std::span<const std::vector<std::string>> sentences, int order,
                        const DiscountConfig& discounting, std::vector<OrderDiscounts>* used);

// 10^(-sum log10 P / M), M = tokens + one </s> per sentence.
double perplexity(const ArpaLanguageModel& lm, std::span<const std::vector<std::string>> sentences);

void write_arpa(const ArpaLanguageModel& lm, std::ostream& out);
void write_arpa(const ArpaLanguageModel& lm, const std::filesystem::path& path);
ArpaLanguageModel read_arpa(std::istream& in);
ArpaLanguageModel read_arpa(const std::filesystem::path& path);

// Unigram floor for <unk>, as a probability.
inline constexpr double kUnkFloor = 1e-10;

}  // namespace asrlab
