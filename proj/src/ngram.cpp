#include "asrlab/ngram.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "asrlab/error.hpp"
#include "asrlab/text.hpp"

namespace asrlab {

std::vector<std::string> tokenize(std::string_view line, LmLevel level) {
  auto words = text::split_words(line);
  if (level == LmLevel::word) return words;
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) tokens.emplace_back(kCharDelimiterToken);
    for (char32_t c : text::to_u32(words[i])) {
      std::string t;
      text::append_utf8(t, c);
      tokens.push_back(std::move(t));
    }
  }
  return tokens;
}

std::vector<std::vector<std::string>> read_token_lines(const std::filesystem::path& path,
                                                       LmLevel level,
                                                       const std::optional<NormalizationConfig>& norm) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = norm ? normalize(line, *norm) : line;
    auto tokens = tokenize(t, level);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Model

std::optional<WordId> ArpaLanguageModel::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId ArpaLanguageModel::id_or_unk(std::string_view word) const {
  auto id = find(word);
  return id ? *id : unk_;
}

const NgramEntry* ArpaLanguageModel::lookup(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > tables_.size()) return nullptr;
  thread_local std::vector<WordId> key;
  key.assign(ngram.begin(), ngram.end());
  const auto& t = tables_[ngram.size() - 1];
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

const NgramEntry* ArpaLanguageModel::lookup(std::span<const std::string> ngram) const {
  std::vector<WordId> ids;
  for (const auto& w : ngram) {
    auto id = find(w);
    if (!id) return nullptr;
    ids.push_back(*id);
  }
  return lookup(ids);
}

std::vector<std::vector<WordId>> ArpaLanguageModel::sorted_ngrams(int k) const {
  std::vector<std::vector<WordId>> keys;
  keys.reserve(table(k).size());
  for (const auto& [key, e] : table(k)) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

LmState ArpaLanguageModel::begin_sentence() const {
  LmState s;
  if (order() > 1) {
    s.words[0] = bos_;
    s.length = 1;
  }
  return s;
}

WordScore ArpaLanguageModel::score_word(const LmState& state, WordId word) const {
  WordScore r;
  const auto ctx = state.context();
  const int len = static_cast<int>(ctx.size());
  const int top = std::min(len, order() - 1);
  std::array<WordId, kMaxLmOrder> gram{};
  double backoff = 0.0;
  bool found = false;
  for (int k = top; k >= 0; --k) {
    std::copy(ctx.end() - k, ctx.end(), gram.begin());
    gram[static_cast<std::size_t>(k)] = word;
    ++r.probes;
    if (const NgramEntry* e = lookup(std::span<const WordId>(gram.data(), static_cast<std::size_t>(k + 1)))) {
      r.log10_prob = backoff + e->log10_prob;
      found = true;
      break;
    }
    if (k > 0) {
      if (const NgramEntry* c = lookup(std::span<const WordId>(gram.data(), static_cast<std::size_t>(k)))) {
        backoff += c->log10_backoff;
      }
    }
  }
  if (!found) {
    // Only reachable for ids outside the unigram table.
    r.log10_prob = backoff + lookup(std::span<const WordId>(&unk_, 1))->log10_prob;
  }
  const int keep = std::max(0, order() - 1);
  std::array<WordId, kMaxLmOrder> hist{};
  std::copy(ctx.begin(), ctx.end(), hist.begin());
  int n = len;
  hist[static_cast<std::size_t>(n++)] = word;
  const int drop = std::max(0, n - keep);
  r.next.length = static_cast<std::uint8_t>(n - drop);
  std::copy(hist.begin() + drop, hist.begin() + n, r.next.words.begin());
  return r;
}

double ArpaLanguageModel::score_sentence(std::span<const std::string> tokens) const {
  LmState s = begin_sentence();
  double total = 0.0;
  for (const auto& t : tokens) {
    auto r = score_word(s, t);
    total += r.log10_prob;
    s = r.next;
  }
  return total + score_end(s);
}

void ArpaLanguageModel::validate() const {
  for (int k = 1; k <= order(); ++k) {
    for (const auto& [key, e] : table(k)) {
      if (!(e.log10_prob <= 0.0)) throw Error("n-gram with positive log10 probability");
      if (k == 1) continue;
      std::span<const WordId> g(key);
      if (!lookup(g.first(key.size() - 1))) throw Error("n-gram prefix missing from lower order");
      if (!lookup(g.last(key.size() - 1))) throw Error("n-gram suffix missing from lower order");
    }
  }
}

// ---------------------------------------------------------------------------
// Builder

ArpaBuilder::ArpaBuilder(int order) {
  if (order < 1 || order > kMaxLmOrder) {
    throw InvalidArgument("n-gram order must be in [1, " + std::to_string(kMaxLmOrder) + "]");
  }
  lm_.tables_.resize(static_cast<std::size_t>(order));
  lm_.bos_ = intern(ArpaLanguageModel::kBos);
  lm_.eos_ = intern(ArpaLanguageModel::kEos);
  lm_.unk_ = intern(ArpaLanguageModel::kUnk);
}

WordId ArpaBuilder::intern(std::string_view word) {
  auto [it, inserted] =
      lm_.index_.try_emplace(std::string(word), static_cast<WordId>(lm_.words_.size()));
  if (inserted) lm_.words_.emplace_back(word);
  return it->second;
}

void ArpaBuilder::set(std::span<const WordId> ngram, NgramEntry entry) {
  if (ngram.empty() || ngram.size() > lm_.tables_.size()) {
    throw InvalidArgument("n-gram length outside model order");
  }
  lm_.tables_[ngram.size() - 1][std::vector<WordId>(ngram.begin(), ngram.end())] = entry;
}

void ArpaBuilder::set(std::span<const std::string> ngram, NgramEntry entry) {
  std::vector<WordId> ids;
  for (const auto& w : ngram) ids.push_back(intern(w));
  set(ids, entry);
}

bool ArpaBuilder::contains(std::span<const WordId> ngram) const { return lm_.lookup(ngram) != nullptr; }

ArpaLanguageModel ArpaBuilder::build() && {
  auto& uni = lm_.tables_[0];
  for (WordId id = 0; id < lm_.words_.size(); ++id) {
    if (uni.contains({id})) continue;
    NgramEntry e;
    e.log10_prob = id == lm_.bos_ ? -99.0 : std::log10(kUnkFloor);
    uni[{id}] = e;
  }
  return std::move(lm_);
}

// ---------------------------------------------------------------------------
// Training

namespace {

using Counts = std::unordered_map<std::vector<WordId>, std::uint64_t, NgramKeyHash>;

OrderDiscounts estimate_discounts(const Counts& adjusted, const DiscountConfig& cfg, WordId bos) {
  OrderDiscounts out;
  const double fixed = cfg.fixed_discount;
  out.d = {fixed, fixed, fixed};
  if (cfg.mode == DiscountConfig::Mode::fixed) return out;
  std::array<double, 5> n{};  // n[r] = number of n-grams with adjusted count r
  for (const auto& [g, c] : adjusted) {
    if (g.size() == 1 && g[0] == bos) continue;
    if (c >= 1 && c <= 4) n[c] += 1.0;
  }
  if (n[1] == 0 || n[2] == 0 || n[3] == 0 || n[4] == 0) {
    out.fell_back = true;
    return out;
  }
  const double y = n[1] / (n[1] + 2.0 * n[2]);
  const std::array<double, 3> d{1.0 - 2.0 * y * n[2] / n[1], 2.0 - 3.0 * y * n[3] / n[2],
                                3.0 - 4.0 * y * n[4] / n[3]};
  for (int r = 0; r < 3; ++r) {
    if (!(d[static_cast<std::size_t>(r)] > 0.0) || d[static_cast<std::size_t>(r)] > r + 1) {
      out.fell_back = true;
      return out;
    }
  }
  out.d = d;
  return out;
}

double discount_for(const OrderDiscounts& d, std::uint64_t count) {
  if (count == 0) return 0.0;
  return d.d[static_cast<std::size_t>(std::min<std::uint64_t>(count, 3) - 1)];
}

}  // namespace

ArpaLanguageModel train(std::span<const std::vector<std::string>> sentences, int order,
                        const DiscountConfig& discounting) {
  return train(sentences, order, discounting, nullptr);
}

ArpaLanguageModel train(std::span<const std::vector<std::string>> sentences, int order,
                        const DiscountConfig& discounting, std::vector<OrderDiscounts>* used) {
  if (order < 1 || order > kMaxLmOrder) {
    throw InvalidArgument("n-gram order must be in [1, " + std::to_string(kMaxLmOrder) + "]");
  }
  if (sentences.empty()) throw InvalidArgument("cannot train a language model on an empty corpus");
  if (!(discounting.fixed_discount > 0.0 && discounting.fixed_discount <= 1.0)) {
    throw InvalidArgument("fixed discount must be in (0, 1]");
  }

  ArpaBuilder builder(order);
  const WordId bos = builder.partial().bos();
  const WordId eos = builder.partial().eos();
  const WordId unk = builder.partial().unk();
  const auto N = static_cast<std::size_t>(order);

  std::vector<Counts> raw(N);
  std::vector<WordId> ids;
  for (const auto& sentence : sentences) {
    ids.clear();
    ids.push_back(bos);
    for (const auto& w : sentence) ids.push_back(builder.intern(w));
    ids.push_back(eos);
    for (std::size_t k = 1; k <= N; ++k) {
      for (std::size_t i = 0; i + k <= ids.size(); ++i) {
        ++raw[k - 1][std::vector<WordId>(ids.begin() + static_cast<std::ptrdiff_t>(i),
                                         ids.begin() + static_cast<std::ptrdiff_t>(i + k))];
      }
    }
  }

  // Adjusted counts: raw at the top order and for n-grams starting with <s>,
  // continuation counts N1+(. g) otherwise.
  std::vector<Counts> adj(N);
  adj[N - 1] = raw[N - 1];
  for (std::size_t k = 1; k < N; ++k) {
    auto& a = adj[k - 1];
    for (const auto& [g, c] : raw[k - 1]) {
      if (g[0] == bos) a[g] = c;
    }
    for (const auto& [g, c] : raw[k]) {
      std::vector<WordId> suffix(g.begin() + 1, g.end());
      if (suffix[0] != bos) ++a[suffix];
    }
  }

  std::vector<OrderDiscounts> discounts(N);
  for (std::size_t k = 0; k < N; ++k) discounts[k] = estimate_discounts(adj[k], discounting, bos);
  if (used) *used = discounts;

  // Unigrams, interpolated with the uniform distribution over every word
  // that can be predicted (all but <s>).
  const auto& words = builder.partial().words();
  std::vector<WordId> predictable;
  for (WordId id = 0; id < words.size(); ++id)
    if (id != bos) predictable.push_back(id);
  {
    const auto& a1 = adj[0];
    double total = 0.0;
    std::array<double, 3> nr{};
    for (WordId id : predictable) {
      auto it = a1.find({id});
      const std::uint64_t c = it == a1.end() ? 0 : it->second;
      total += static_cast<double>(c);
      if (c > 0) nr[std::min<std::uint64_t>(c, 3) - 1] += 1.0;
    }
    const auto& d = discounts[0];
    const double gamma = (d.d[0] * nr[0] + d.d[1] * nr[1] + d.d[2] * nr[2]) / total;
    const double uniform = gamma / static_cast<double>(predictable.size());
    for (WordId id : predictable) {
      auto it = a1.find({id});
      const std::uint64_t c = it == a1.end() ? 0 : it->second;
      double p = std::max(static_cast<double>(c) - discount_for(d, c), 0.0) / total + uniform;
      if (id == unk) p = std::max(p, kUnkFloor);
      builder.set(std::span<const WordId>(&id, 1), NgramEntry{std::log10(p), 0.0});
    }
    builder.set(std::span<const WordId>(&bos, 1), NgramEntry{-99.0, 0.0});
  }

  for (std::size_t k = 2; k <= N; ++k) {
    const auto& ak = adj[k - 1];
    const auto& d = discounts[k - 1];
    struct ContextStats {
      double total = 0.0;
      std::array<double, 3> nr{};
    };
    std::map<std::vector<WordId>, ContextStats> contexts;
    for (const auto& [g, c] : ak) {
      auto& cs = contexts[std::vector<WordId>(g.begin(), g.end() - 1)];
      cs.total += static_cast<double>(c);
      cs.nr[std::min<std::uint64_t>(c, 3) - 1] += 1.0;
    }
    std::map<std::vector<WordId>, double> gammas;
    for (const auto& [h, cs] : contexts) {
      const double gamma = (d.d[0] * cs.nr[0] + d.d[1] * cs.nr[1] + d.d[2] * cs.nr[2]) / cs.total;
      gammas[h] = gamma;
      const NgramEntry* prev = builder.partial().lookup(h);
      if (!prev) throw Error("internal: n-gram context missing from lower order");
      builder.set(h, NgramEntry{prev->log10_prob, std::log10(gamma)});
    }
    // Sorted iteration keeps the floating-point path independent of hash order.
    std::vector<std::pair<std::vector<WordId>, std::uint64_t>> grams(ak.begin(), ak.end());
    std::sort(grams.begin(), grams.end());
    std::vector<std::pair<std::vector<WordId>, double>> probs;
    probs.reserve(grams.size());
    for (const auto& [g, c] : grams) {
      std::vector<WordId> h(g.begin(), g.end() - 1);
      const auto& cs = contexts.at(h);
      LmState lower;
      for (std::size_t i = 1; i < h.size(); ++i) lower.words[lower.length++] = h[i];
      const double p_lower = std::pow(10.0, builder.partial().score_word(lower, g.back()).log10_prob);
      const double p = (static_cast<double>(c) - discount_for(d, c)) / cs.total + gammas.at(h) * p_lower;
      probs.emplace_back(g, p);
    }
    for (const auto& [g, p] : probs) builder.set(g, NgramEntry{std::log10(p), 0.0});
  }
  return std::move(builder).build();
}

double perplexity(const ArpaLanguageModel& lm, std::span<const std::vector<std::string>> sentences) {
  double total = 0.0;
  std::size_t m = 0;
  for (const auto& s : sentences) {
    total += lm.score_sentence(s);
    m += s.size() + 1;
  }
  if (m == 0) throw InvalidArgument("perplexity of an empty text");
  return std::pow(10.0, -total / static_cast<double>(m));
}

// ---------------------------------------------------------------------------
// ARPA I/O

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

bool parse_double(std::string_view s, double& out) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

void write_arpa(const ArpaLanguageModel& lm, std::ostream& out) {
  out << "\\data\\\n";
  for (int k = 1; k <= lm.order(); ++k) out << "ngram " << k << '=' << lm.count(k) << '\n';
  for (int k = 1; k <= lm.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    for (const auto& g : lm.sorted_ngrams(k)) {
      const NgramEntry& e = *lm.lookup(g);
      out << fmt_double(e.log10_prob) << '\t';
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out << ' ';
        out << lm.words()[g[i]];
      }
      if (k < lm.order()) out << '\t' << fmt_double(e.log10_backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

void write_arpa(const ArpaLanguageModel& lm, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    write_arpa(lm, out);
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ArpaLanguageModel read_arpa(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_nonblank = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!text::trim(out).empty()) return true;
    }
    return false;
  };

  if (!next_nonblank(line) || text::trim(line) != "\\data\\") {
    throw ParseError("ARPA: expected \\data\\ header", lineno);
  }
  std::vector<std::size_t> declared;
  for (;;) {
    if (!next_nonblank(line)) throw ParseError("ARPA: unexpected end of file in header", lineno);
    auto t = text::trim(line);
    if (!t.starts_with("ngram ")) break;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("ARPA: malformed ngram count line", lineno);
    std::size_t k = 0, c = 0;
    const auto ks = text::trim(t.substr(6, eq - 6));
    const auto cs = text::trim(t.substr(eq + 1));
    if (std::from_chars(ks.data(), ks.data() + ks.size(), k).ec != std::errc() ||
        std::from_chars(cs.data(), cs.data() + cs.size(), c).ec != std::errc()) {
      throw ParseError("ARPA: malformed ngram count line", lineno);
    }
    if (k != declared.size() + 1) throw ParseError("ARPA: ngram counts out of order", lineno);
    declared.push_back(c);
  }
  if (declared.empty()) throw ParseError("ARPA: no ngram counts in header", lineno);
  const int order = static_cast<int>(declared.size());
  ArpaBuilder builder(order);

  for (int k = 1; k <= order; ++k) {
    const std::string expect = "\\" + std::to_string(k) + "-grams:";
    if (text::trim(line) != expect) {
      throw ParseError("ARPA: expected section " + expect + ", found '" + std::string(text::trim(line)) + "'",
                       lineno);
    }
    std::size_t n = 0;
    for (;;) {
      if (!next_nonblank(line)) throw ParseError("ARPA: unexpected end of file", lineno);
      if (text::trim(line).starts_with("\\")) break;
      auto fields = text::split_words(line);
      const std::size_t want = static_cast<std::size_t>(k) + 1;
      if (fields.size() != want && fields.size() != want + 1) {
        throw ParseError("ARPA: wrong number of fields in " + std::to_string(k) + "-gram entry", lineno);
      }
      NgramEntry e;
      if (!parse_double(fields[0], e.log10_prob)) throw ParseError("ARPA: bad probability", lineno);
      if (fields.size() == want + 1) {
        if (k == order) throw ParseError("ARPA: backoff weight on highest-order n-gram", lineno);
        if (!parse_double(fields.back(), e.log10_backoff)) throw ParseError("ARPA: bad backoff", lineno);
      }
      std::vector<std::string> words(fields.begin() + 1, fields.begin() + static_cast<std::ptrdiff_t>(want));
      builder.set(words, e);
      ++n;
    }
    if (n != declared[static_cast<std::size_t>(k - 1)]) {
      throw ParseError("ARPA: section " + expect + " has " + std::to_string(n) + " entries, header declares " +
                           std::to_string(declared[static_cast<std::size_t>(k - 1)]),
                       lineno);
    }
  }
  if (text::trim(line) != "\\end\\") {
    throw ParseError("ARPA: expected \\end\\, found '" + std::string(text::trim(line)) + "'", lineno);
  }
  return std::move(builder).build();
}

ArpaLanguageModel read_arpa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_arpa(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace asrlab
