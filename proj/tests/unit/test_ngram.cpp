#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "asrlab/error.hpp"
#include "asrlab/ngram.hpp"
#include "asrlab/rng.hpp"
#include "fixtures.hpp"

using namespace asrlab;
using Sentences = std::vector<std::vector<std::string>>;

namespace {

// Backoff recursion by walking the tables with word strings.
double walk(const ArpaLanguageModel& lm, std::vector<std::string> ctx, const std::string& w) {
  std::vector<std::string> g = ctx;
  g.push_back(w);
  if (const auto* e = lm.lookup(std::span<const std::string>(g))) return e->log10_prob;
  if (ctx.empty()) return lm.lookup(std::vector<std::string>{std::string(ArpaLanguageModel::kUnk)})->log10_prob;
  double bow = 0.0;
  if (const auto* c = lm.lookup(std::span<const std::string>(ctx))) bow = c->log10_backoff;
  ctx.erase(ctx.begin());
  return bow + walk(lm, ctx, w);
}

double oracle_sentence(const ArpaLanguageModel& lm, const std::vector<std::string>& words) {
  std::vector<std::string> hist{std::string(ArpaLanguageModel::kBos)};
  double total = 0.0;
  auto step = [&](std::string w) {
    if (!lm.find(w)) w = ArpaLanguageModel::kUnk;
    std::vector<std::string> ctx(hist.end() - std::min<std::ptrdiff_t>(hist.size(), lm.order() - 1), hist.end());
    total += walk(lm, ctx, w);
    hist.push_back(w);
  };
  for (const auto& w : words) step(w);
  step(std::string(ArpaLanguageModel::kEos));
  return total;
}

Sentences random_corpus(Rng& rng, int lines, std::size_t vocab) {
  Sentences c;
  for (int s = 0; s < lines; ++s) {
    std::vector<std::string> sent;
    const auto len = 1 + rng.below(8);
    for (std::size_t k = 0; k < len; ++k) sent.push_back("w" + std::to_string(rng.below(vocab)));
    c.push_back(sent);
  }
  return c;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("  the  cat ", LmLevel::word) == std::vector<std::string>{"the", "cat"});
  CHECK(tokenize("ab  ñ", LmLevel::character) == std::vector<std::string>{"a", "b", "<sp>", "ñ"});
}

TEST_CASE("hand-worked Kneser-Ney bigram") {
  const Sentences corpus{{"a", "b", "a", "b"}};
  const auto lm = train(corpus, 2, {DiscountConfig::Mode::fixed, 0.75});
  auto p = [&](std::vector<std::string> g) { return std::pow(10.0, lm.lookup(std::span<const std::string>(g))->log10_prob); };
  CHECK(p({"a"}) == doctest::Approx(0.453125).epsilon(1e-12));
  CHECK(p({"<unk>"}) == doctest::Approx(0.140625).epsilon(1e-12));
  CHECK(p({"a", "b"}) == doctest::Approx(0.701171875).epsilon(1e-12));
  CHECK(p({"b", "</s>"}) == doctest::Approx(0.27734375).epsilon(1e-12));
  CHECK(p({"<s>", "a"}) == doctest::Approx(0.58984375).epsilon(1e-12));
  // Unseen bigram backs off: P(b | b) = gamma(b) * P(b)
  const auto s = lm.score_word(lm.score_word(lm.null_state(), "b").next, "b");
  CHECK(std::pow(10.0, s.log10_prob) == doctest::Approx(0.75 * 0.203125).epsilon(1e-12));
}

TEST_CASE("order 1 ranks by count") {
  const Sentences corpus{{"a", "a", "a", "b"}};
  const auto lm = train(corpus, 1);
  CHECK(lm.order() == 1);
  CHECK(lm.score_word(lm.null_state(), "a").log10_prob > lm.score_word(lm.null_state(), "b").log10_prob);
}

TEST_CASE("conditional distributions sum to one") {
  Rng rng(2);
  for (int order : {2, 3, 4}) {
    const auto lm = train(random_corpus(rng, 60, 6), order);
    lm.validate();
    std::vector<WordId> predicted;
    for (WordId w = 0; w < lm.vocab_size(); ++w) if (w != lm.bos()) predicted.push_back(w);
    int contexts = 0;
    for (int k = 1; k < order; ++k) {
      for (const auto& ctx : lm.sorted_ngrams(k)) {
        if (ctx.back() == lm.eos() || ctx.back() == lm.unk()) continue;
        LmState st;
        st.length = static_cast<std::uint8_t>(ctx.size());
        std::copy(ctx.begin(), ctx.end(), st.words.begin());
        double sum = 0.0;
        for (WordId w : predicted) sum += std::pow(10.0, lm.score_word(st, w).log10_prob);
        REQUIRE(sum == doctest::Approx(1.0).epsilon(1e-6));
        if (++contexts == 100) break;
      }
    }
  }
}

TEST_CASE("score_word follows the backoff recursion") {
  Rng rng(6);
  const auto lm = train(random_corpus(rng, 80, 7), 3);
  const auto test = random_corpus(rng, 40, 9);  // includes unseen words
  for (const auto& s : test) {
    CHECK(lm.score_sentence(s) == doctest::Approx(oracle_sentence(lm, s)).epsilon(1e-12));
    LmState st = lm.begin_sentence();
    for (const auto& w : s) {
      const auto r = lm.score_word(st, w);
      REQUIRE(r.probes <= lm.order());
      REQUIRE(r.next.length <= lm.order() - 1);
      st = r.next;
    }
  }
}

TEST_CASE("top-order lookup and unknown words") {
  const Sentences corpus{{"x", "y", "z"}, {"x", "y", "w"}};
  const auto lm = train(corpus, 3);
  const auto st = lm.score_word(lm.begin_sentence(), "x").next;
  const auto st2 = lm.score_word(st, "y").next;
  const auto r = lm.score_word(st2, "z");
  const std::vector<std::string> g{"x", "y", "z"};
  CHECK(r.log10_prob == lm.lookup(std::span<const std::string>(g))->log10_prob);
  CHECK(lm.id_or_unk("never-seen") == lm.unk());
  CHECK(lm.score_word(st2, "never-seen").log10_prob == lm.score_word(st2, lm.unk()).log10_prob);
}

TEST_CASE("uniform unigram has perplexity V") {
  ArpaBuilder b(1);
  const std::vector<std::string> words{"p", "q", "r", "s", "</s>"};
  const double lp = std::log10(1.0 / static_cast<double>(words.size()));
  for (const auto& w : words) b.set(std::vector<std::string>{w}, {lp, 0.0});
  const auto lm = std::move(b).build();
  const Sentences text{{"p", "q"}, {"s", "s", "r"}};
  CHECK(perplexity(lm, text) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("perplexity on a 20-word fixture equals the hand oracle") {
  const Sentences corpus{{"el", "perro", "come"}, {"el", "gato", "come", "pan"},
                         {"un", "perro", "duerme"}, {"el", "gato", "duerme", "mucho"},
                         {"un", "gato", "come", "pan", "y", "duerme"}};
  const auto lm = train(corpus, 2);
  double total = 0.0;
  std::size_t m = 0;
  for (const auto& s : corpus) {
    total += oracle_sentence(lm, s);
    m += s.size() + 1;
  }
  CHECK(m == 20 + corpus.size());
  CHECK(perplexity(lm, corpus) == doctest::Approx(std::pow(10.0, -total / m)).epsilon(1e-9));

  const Sentences other{{"la", "vaca", "come", "pasto"}, {"una", "vaca", "duerme"}};
  const auto disjoint = train(other, 2);
  CHECK(perplexity(lm, corpus) <= perplexity(disjoint, corpus));
}

TEST_CASE("adding a sentence never removes n-grams") {
  Rng rng(9);
  auto corpus = random_corpus(rng, 30, 5);
  const auto before = train(corpus, 3);
  corpus.push_back({"w1", "w9", "w2"});
  const auto after = train(corpus, 3);
  for (int k = 1; k <= 3; ++k) {
    for (const auto& g : before.sorted_ngrams(k)) {
      std::vector<std::string> words;
      for (WordId w : g) words.push_back(before.words()[w]);
      REQUIRE(after.lookup(std::span<const std::string>(words)) != nullptr);
    }
  }
}

TEST_CASE("ARPA round trip") {
  Rng rng(12);
  const auto lm = train(random_corpus(rng, 50, 6), 3);
  std::stringstream ss;
  write_arpa(lm, ss);
  const std::string text = ss.str();
  for (int k = 1; k <= 3; ++k) {
    CHECK(text.find("ngram " + std::to_string(k) + "=" + std::to_string(lm.count(k)) + "\n") != std::string::npos);
  }
  const auto back = read_arpa(ss);
  REQUIRE(back.order() == 3);
  for (int k = 1; k <= 3; ++k) {
    REQUIRE(back.count(k) == lm.count(k));
    for (const auto& g : lm.sorted_ngrams(k)) {
      std::vector<std::string> words;
      for (WordId w : g) words.push_back(lm.words()[w]);
      const auto* a = lm.lookup(g);
      const auto* b = back.lookup(std::span<const std::string>(words));
      REQUIRE(b != nullptr);
      REQUIRE(std::abs(a->log10_prob - b->log10_prob) <= 1e-12);
      REQUIRE(std::abs(a->log10_backoff - b->log10_backoff) <= 1e-12);
    }
  }
  const auto test = random_corpus(rng, 10, 6);
  CHECK(perplexity(back, test) == doctest::Approx(perplexity(lm, test)).epsilon(1e-12));

  asrlab::testing::ScratchDir dir("arpa");
  write_arpa(lm, dir / "m.arpa");
  CHECK(read_arpa(dir / "m.arpa").count(2) == lm.count(2));
}

TEST_CASE("ARPA parse errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_arpa(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string good =
      "\\data\\\nngram 1=3\nngram 2=1\n\n\\1-grams:\n-1\t<s>\t-0.3\n-0.5\ta\t-0.2\n-0.5\t</s>\n\n"
      "\\2-grams:\n-0.1\t<s> a\n\n\\end\\\n";
  std::istringstream ok(good);
  CHECK(read_arpa(ok).count(1) >= 3);

  // Sections out of order
  const std::string swapped =
      "\\data\\\nngram 1=1\nngram 2=1\n\n\\2-grams:\n-0.1\t<s> a\n\n\\1-grams:\n-0.5\ta\n\n\\end\\\n";
  CHECK(line_of(swapped) == 5);
  CHECK(line_of("ngram 1=1\n") == 1);
  CHECK(line_of("\\data\\\nngram 1=2\n\n\\1-grams:\n-0.5\ta\n\n\\end\\\n") > 0);
  CHECK(line_of("\\data\\\nngram 1=1\n\n\\1-grams:\nnope\ta\n\n\\end\\\n") == 5);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train(Sentences{}, 3), InvalidArgument);
  CHECK_THROWS_AS(train(Sentences{{"a"}}, 0), InvalidArgument);
  CHECK_THROWS_AS(train(Sentences{{"a"}}, 7), InvalidArgument);
}

TEST_CASE("modified discounts fall back on degenerate counts") {
  std::vector<OrderDiscounts> used;
  train(Sentences{{"a", "b"}}, 2, {}, &used);
  REQUIRE(used.size() == 2);
  CHECK(used[1].fell_back);
  CHECK(used[1].d[0] == 0.75);

  Rng rng(1);
  train(random_corpus(rng, 400, 30), 2, {}, &used);
  CHECK_FALSE(used[1].fell_back);
  CHECK(used[1].d[0] > 0.0);
  CHECK(used[1].d[0] < 1.0);
}
