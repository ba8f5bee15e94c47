#include "asrlab/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "asrlab/error.hpp"
#include "asrlab/kernels.hpp"
#include "asrlab/metrics.hpp"

namespace asrlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

struct Prefix {
  std::string text;
  int last = -1;
  double pb = kNegInf;
  double pnb = kNegInf;
  LmState state;
  double lm = 0.0;
  std::size_t words = 0;
  std::size_t word_start = 0;

  double acoustic() const { return logaddexp(pb, pnb); }
};

class Fusion {
 public:
  explicit Fusion(const DecodeConfig& cfg) : cfg_(cfg) {}

  LmState initial() const { return cfg_.lm ? cfg_.lm->begin_sentence() : LmState{}; }

  // Natural-log probability of `token` after `state`; advances `state`.
  double score(LmState& state, std::string_view token) const {
    const auto ws = cfg_.lm->score_word(state, token);
    state = ws.next;
    return ws.log10_prob * std::numbers::ln10;
  }

  // Scores a finished word; returns false when the word is empty after
  // normalization and so does not count.
  bool close_word(Prefix& p, std::string_view word) const {
    if (word.empty()) return false;
    if (cfg_.lm_level == LmLevel::character || !cfg_.lm) return true;
    if (cfg_.normalize_cfg) {
      const std::string w = normalize(word, *cfg_.normalize_cfg);
      if (w.empty()) return false;
      p.lm += score(p.state, w);
    } else {
      p.lm += score(p.state, word);
    }
    return true;
  }

  // Fills in the LM fields of `child`, the extension of `parent` by symbol
  // text `sym`.
  void extend(const Prefix& parent, Prefix& child, std::string_view sym, bool delimiter) const {
    child.state = parent.state;
    child.lm = parent.lm;
    child.words = parent.words;
    child.word_start = parent.word_start;
    if (cfg_.lm && cfg_.lm_level == LmLevel::character) {
      child.lm += score(child.state, delimiter ? kCharDelimiterToken : sym);
    }
    if (delimiter) {
      const std::string_view word = std::string_view(parent.text).substr(parent.word_start);
      if (close_word(child, word)) ++child.words;
      child.word_start = child.text.size();
    }
  }

  void finish(Prefix& p) const {
    const std::string_view word = std::string_view(p.text).substr(p.word_start);
    if (close_word(p, word)) ++p.words;
    if (cfg_.lm) p.lm += cfg_.lm->score_end(p.state) * std::numbers::ln10;
  }

  double rank_score(const Prefix& p) const {
    return p.acoustic() + cfg_.alpha * p.lm + cfg_.beta * static_cast<double>(p.words);
  }

 private:
  const DecodeConfig& cfg_;
};

}  // namespace

void DecodeConfig::validate() const {
  if (beam_width < 1) throw InvalidArgument("beam width must be at least 1");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidArgument("alpha and beta must be finite");
  if (normalize_cfg) normalize_cfg->validate();
}

std::string greedy_decode(const EmissionMatrix& em) {
  std::string out;
  std::size_t prev = 0;
  for (std::size_t t = 0; t < em.frames(); ++t) {
    const auto f = em.frame(t);
    const auto best = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    if (best != 0 && best != prev) out += em.vocab()[best];
    prev = best;
  }
  return out;
}

std::vector<Hypothesis> beam_decode(const EmissionMatrix& em, const DecodeConfig& cfg) {
  cfg.validate();
  const Fusion fusion(cfg);
  const std::size_t V = em.vocab_size();
  const std::size_t delim = em.delimiter_index();
  const auto& vocab = em.vocab();

  std::vector<Prefix> beam(1);
  beam[0].pb = 0.0;
  beam[0].state = fusion.initial();

  std::vector<Prefix> next;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> order;
  std::vector<double> scores;

  for (std::size_t t = 0; t < em.frames(); ++t) {
    const auto f = em.frame(t);
    next.clear();
    index.clear();
    auto slot = [&](const Prefix& parent, std::size_t s) -> Prefix& {
      std::string text = parent.text + vocab[s];
      auto [it, inserted] = index.try_emplace(std::move(text), next.size());
      if (inserted) {
        Prefix child;
        child.text = it->first;
        child.last = static_cast<int>(s);
        fusion.extend(parent, child, vocab[s], s == delim);
        next.push_back(std::move(child));
      }
      return next[it->second];
    };
    auto same = [&](const Prefix& p) -> Prefix& {
      auto [it, inserted] = index.try_emplace(p.text, next.size());
      if (inserted) {
        Prefix copy = p;
        copy.pb = kNegInf;
        copy.pnb = kNegInf;
        next.push_back(std::move(copy));
      }
      return next[it->second];
    };

    for (const Prefix& p : beam) {
      const double total = p.acoustic();
      for (std::size_t s = 0; s < V; ++s) {
        const double e = f[s];
        if (e == kNegInf) continue;
        if (s == 0) {
          Prefix& q = same(p);
          q.pb = logaddexp(q.pb, total + e);
        } else if (static_cast<int>(s) == p.last) {
          Prefix& q = same(p);
          q.pnb = logaddexp(q.pnb, p.pnb + e);
          if (p.pb != kNegInf) {
            Prefix& c = slot(p, s);
            c.pnb = logaddexp(c.pnb, p.pb + e);
          }
        } else {
          Prefix& c = slot(p, s);
          c.pnb = logaddexp(c.pnb, total + e);
        }
      }
    }

    order.clear();
    scores.resize(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      scores[i] = fusion.rank_score(next[i]);
      if (scores[i] != kNegInf && !std::isnan(scores[i])) order.push_back(i);
    }
    auto better = [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return next[a].text < next[b].text;
    };
    if (order.size() > cfg.beam_width) {
      std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.beam_width),
                       order.end(), better);
      order.resize(cfg.beam_width);
    }
    beam.clear();
    for (std::size_t i : order) beam.push_back(std::move(next[i]));
    if (beam.empty()) break;
  }

  std::vector<Hypothesis> out;
  out.reserve(beam.size());
  for (Prefix& p : beam) {
    fusion.finish(p);
    Hypothesis h;
    h.text = p.text;
    h.acoustic = p.acoustic();
    h.lm_score = p.lm;
    h.words = p.words;
    h.p_blank = p.pb;
    h.p_nonblank = p.pnb;
    h.log_score = fusion.rank_score(p);
    out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    return a.text < b.text;
  });
  if (out.empty()) {
    Hypothesis h;
    h.log_score = h.acoustic = h.p_blank = h.p_nonblank = kNegInf;
    out.push_back(h);
  }
  if (cfg.normalize_cfg) {
    for (auto& h : out) h.text = normalize(h.text, *cfg.normalize_cfg);
  }
  return out;
}

BruteForceResult brute_force_decode(const EmissionMatrix& em) {
  const std::size_t T = em.frames();
  const std::size_t V = em.vocab_size();
  if (T > 8 || V > 5) throw InvalidArgument("brute-force decoding is limited to T <= 8 and V <= 5");

  std::map<std::string, double> log_mass;
  std::vector<std::size_t> path(T, 0);
  while (true) {
    double lp = 0.0;
    std::string text;
    std::size_t prev = 0;
    for (std::size_t t = 0; t < T; ++t) {
      lp += em.at(t, path[t]);
      if (path[t] != 0 && path[t] != prev) text += em.vocab()[path[t]];
      prev = path[t];
    }
    auto [it, inserted] = log_mass.try_emplace(std::move(text), lp);
    if (!inserted) it->second = logaddexp(it->second, lp);

    std::size_t k = 0;
    while (k < T && ++path[k] == V) path[k++] = 0;
    if (k == T) break;
  }

  BruteForceResult r;
  r.log_mass = kNegInf;
  for (const auto& [text, lm] : log_mass) {
    r.distribution[text] = std::exp(lm);
    // Map iteration is lexicographic, so strict > keeps the smallest text on ties.
    if (lm > r.log_mass) {
      r.log_mass = lm;
      r.best = text;
    }
  }
  r.posterior = std::exp(r.log_mass);
  return r;
}

double dev_wer(std::span<const DevUtterance> dev, const DecodeConfig& cfg, const NormalizationConfig& norm) {
  std::vector<const EmissionMatrix*> ems;
  ems.reserve(dev.size());
  for (const auto& d : dev) ems.push_back(&d.emissions);
  const auto hyps = kernels::beam_decode_batch(ems, cfg);
  std::vector<RefHyp> pairs;
  pairs.reserve(dev.size());
  for (std::size_t i = 0; i < dev.size(); ++i) {
    pairs.push_back({normalize(dev[i].reference, norm), normalize(hyps[i].front().text, norm)});
  }
  return corpus_rate(pairs, RateLevel::word);
}

TuneResult tune_alpha_beta(std::span<const DevUtterance> dev, std::shared_ptr<const ArpaLanguageModel> lm,
                           const TuneOptions& opts) {
  if (dev.empty()) throw InvalidArgument("tuning needs a non-empty dev set");
  if (opts.trials < 1) throw InvalidArgument("tuning needs at least one trial");

  hpo::SearchSpace space;
  space.params = {hpo::ParamSpec::uniform("alpha", 0.0, opts.alpha_max),
                  hpo::ParamSpec::uniform("beta", opts.beta_min, opts.beta_max)};

  const hpo::Objective objective = [&](const hpo::ParamMap& p) -> std::optional<hpo::MetricMap> {
    DecodeConfig cfg;
    cfg.beam_width = opts.beam_width;
    cfg.alpha = std::get<double>(p.at("alpha"));
    cfg.beta = std::get<double>(p.at("beta"));
    cfg.lm = lm;
    cfg.lm_level = opts.lm_level;
    return hpo::MetricMap{{"wer", dev_wer(dev, cfg, opts.normalize_cfg)}};
  };

  hpo::RunOptions run;
  run.objective_metric = "wer";
  run.direction = hpo::Direction::minimize;
  if (opts.include_baseline) run.enqueued.push_back({{"alpha", 0.0}, {"beta", 0.0}});

  TuneResult r;
  r.study = hpo::run_study(space, objective, opts.trials, hpo::SamplerKind::tpe, opts.seed, run);
  const auto& best = r.study.best();
  r.alpha = std::get<double>(best.params.at("alpha"));
  r.beta = std::get<double>(best.params.at("beta"));
  r.dev_wer = best.metrics.at("wer");
  return r;
}

}  // namespace asrlab
