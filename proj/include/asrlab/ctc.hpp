#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrlab/corpus.hpp"
#include "asrlab/hpo.hpp"
#include "asrlab/ngram.hpp"
#include "asrlab/normalize.hpp"

namespace asrlab {

struct DecodeConfig {
  std::size_t beam_width = 128;
  double alpha = 0.0;  // LM weight on natural-log probabilities
  double beta = 0.0;   // bonus per word
  std::shared_ptr<const ArpaLanguageModel> lm;
  // Word-level models are consulted at delimiter emissions and at the end of
  // the utterance; character-level models at every emitted symbol, with the
  // delimiter spelled kCharDelimiterToken.
  LmLevel lm_level = LmLevel::word;
  // Applied to each word before LM lookup and to the output texts.
  std::optional<NormalizationConfig> normalize_cfg;

  void validate() const;
};

struct Hypothesis {
  std::string text;
  double log_score = 0.0;   // acoustic + alpha * lm_score + beta * words
  double acoustic = 0.0;    // logaddexp(p_blank, p_nonblank)
  double lm_score = 0.0;    // natural log, including end of sentence
  std::size_t words = 0;
  double p_blank = 0.0;
  double p_nonblank = 0.0;
};

std::string greedy_decode(const EmissionMatrix& em);

// Prefix beam search. Returns the final beam ranked by log_score
// descending, ties by text ascending. Never empty.
std::vector<Hypothesis> beam_decode(const EmissionMatrix& em, const DecodeConfig& cfg);

struct BruteForceResult {
  std::string best;
  double posterior = 0.0;  // probability of `best`
  double log_mass = 0.0;   // natural log of the same
  std::map<std::string, double> distribution;
};

// Sums every alignment path by collapsed transcript. T <= 8, V <= 5.
BruteForceResult brute_force_decode(const EmissionMatrix& em);

struct DevUtterance {
  EmissionMatrix emissions;
  std::string reference;
};

struct TuneOptions {
  std::size_t trials = 50;
  std::size_t beam_width = 128;
  std::uint64_t seed = 0;
  double alpha_max = 5.0;
  double beta_min = -5.0;
  double beta_max = 5.0;
  LmLevel lm_level = LmLevel::word;
  // Applied to references and hypotheses before scoring.
  NormalizationConfig normalize_cfg;
  // Evaluate (0, 0) as the first trial.
  bool include_baseline = false;
};

struct TuneResult {
  double alpha = 0.0;
  double beta = 0.0;
  double dev_wer = 0.0;
  hpo::Study study;
};

// Dev-set WER of one (alpha, beta) setting.
double dev_wer(std::span<const DevUtterance> dev, const DecodeConfig& cfg,
               const NormalizationConfig& norm);

// Bayesian search over alpha in [0, alpha_max], beta in [beta_min, beta_max]
// minimizing normalized dev WER.
TuneResult tune_alpha_beta(std::span<const DevUtterance> dev,
                           std::shared_ptr<const ArpaLanguageModel> lm, const TuneOptions& opts = {});

}  // namespace asrlab
