#include <algorithm>
#include <iostream>

#include <json.hpp>

#include "asrlab/ctc.hpp"
#include "asrlab/kernels.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct DecodeArgs {
  std::string emissions;
  std::string out;
  std::string mode = "greedy";
  std::string lm;
  bool no_lm = false;
  std::string lm_level = "word";
  double alpha = 0.5;
  double beta = 1.0;
  std::size_t beam_width = 128;
  bool normalize = false;
  std::string normalize_config;
  std::string nbest;
  std::size_t nbest_size = 10;
  bool scores = false;
  bool lenient = false;
};

std::vector<std::filesystem::path> emission_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("emissions directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".emx") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Vocabulary conventions the LM and the emissions must agree on.
void check_lm_vocab(const ArpaLanguageModel& lm, LmLevel level, const EmissionMatrix& em) {
  const auto& words = lm.words();
  if (level == LmLevel::word) {
    for (const auto& w : words) {
      if (w == kCharDelimiterToken) {
        throw Error("language model looks character-level (contains " + std::string(kCharDelimiterToken) +
                    ") but --lm-level is word");
      }
      if (w.find(' ') != std::string::npos) throw Error("language model word contains the delimiter: '" + w + "'");
    }
    return;
  }
  for (std::size_t s = 1; s < em.vocab_size(); ++s) {
    const std::string sym = s == em.delimiter_index() ? std::string(kCharDelimiterToken) : em.vocab()[s];
    if (!lm.find(sym)) throw Error("emission symbol '" + sym + "' is missing from the character language model");
  }
}

int run(const DecodeArgs& a) {
  const bool beam = a.mode == "beam";
  if (beam && a.lm.empty() && !a.no_lm) throw UsageError("beam mode needs --lm or an explicit --no-lm");
  if (!a.lm.empty() && a.no_lm) throw UsageError("--lm and --no-lm are mutually exclusive");
  if (!beam && (!a.lm.empty() || !a.nbest.empty())) throw UsageError("--lm and --nbest apply to beam mode only");

  DecodeConfig cfg;
  cfg.beam_width = a.beam_width;
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.lm_level = a.lm_level == "char" ? LmLevel::character : LmLevel::word;
  const auto norm = normalization_from_flags(a.normalize, a.normalize_config);
  cfg.normalize_cfg = norm;
  if (!a.lm.empty()) cfg.lm = std::make_shared<const ArpaLanguageModel>(read_arpa(std::filesystem::path(a.lm)));

  const auto files = emission_files(a.emissions);
  if (files.empty()) throw Error("no .emx files in " + a.emissions);

  std::vector<EmissionMatrix> ems(files.size());
  std::vector<std::string> errors(files.size());
  kernels::parallel_for(files.size(), [&](std::size_t i) {
    try {
      EmissionReadOptions ro;
      ro.strict = !a.lenient;
      ems[i] = read_emissions(files[i], ro);
      if (cfg.lm) check_lm_vocab(*cfg.lm, cfg.lm_level, ems[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::vector<std::size_t> ok;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (errors[i].empty()) {
      ok.push_back(i);
    } else {
      log(files[i].string() + ": " + errors[i]);
      ++failed;
    }
  }
  std::vector<const EmissionMatrix*> ptrs;
  for (std::size_t i : ok) ptrs.push_back(&ems[i]);

  std::string tsv;
  std::string jsonl;
  if (beam) {
    const auto hyps = kernels::beam_decode_batch(ptrs, cfg);
    for (std::size_t k = 0; k < ok.size(); ++k) {
      const auto& id = ems[ok[k]].utterance_id();
      const auto& top = hyps[k].front();
      const std::string text = norm ? normalize(top.text, *norm) : top.text;
      tsv += id + "\t" + text;
      if (a.scores) tsv += "\t" + nlohmann::json(top.log_score).dump();
      tsv += "\n";
      if (!a.nbest.empty()) {
        nlohmann::json list = nlohmann::json::array();
        for (std::size_t r = 0; r < std::min(a.nbest_size, hyps[k].size()); ++r) {
          const auto& h = hyps[k][r];
          list.push_back({{"text", norm ? normalize(h.text, *norm) : h.text},
                          {"log_score", h.log_score},
                          {"acoustic", h.acoustic},
                          {"lm", h.lm_score},
                          {"words", h.words}});
        }
        jsonl += nlohmann::json{{"id", id}, {"hypotheses", list}}.dump() + "\n";
      }
    }
  } else {
    const auto texts = kernels::greedy_decode_batch(ptrs);
    for (std::size_t k = 0; k < ok.size(); ++k) {
      tsv += ems[ok[k]].utterance_id() + "\t" + (norm ? normalize(texts[k], *norm) : texts[k]) + "\n";
    }
  }
  write_file(a.out, tsv);
  if (!a.nbest.empty()) write_file(a.nbest, jsonl);
  if (failed) {
    log(std::to_string(failed) + " of " + std::to_string(files.size()) + " utterances failed");
    return kFailure;
  }
  return kOk;
}

}  // namespace

void setup_decode(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<DecodeArgs>();
  auto* sub = app.add_subcommand("decode", "Decode emission matrices (greedy or LM-fused beam search)");
  sub->add_option("--emissions", a->emissions, "Directory of .emx files")->required();
  sub->add_option("--out", a->out, "Output TSV: id<TAB>text[<TAB>log_score]")->required();
  sub->add_option("--mode", a->mode, "greedy or beam")->check(CLI::IsMember({"greedy", "beam"}))->capture_default_str();
  sub->add_option("--lm", a->lm, "ARPA language model");
  sub->add_flag("--no-lm", a->no_lm, "Beam search without a language model");
  sub->add_option("--lm-level", a->lm_level, "word or char")->check(CLI::IsMember({"word", "char"}))->capture_default_str();
  sub->add_option("--alpha", a->alpha, "LM weight")->capture_default_str();
  sub->add_option("--beta", a->beta, "Word insertion bonus")->capture_default_str();
  sub->add_option("--beam-width", a->beam_width, "Beam width")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_flag("--normalize", a->normalize, "Apply the default text normalization to outputs");
  sub->add_option("--normalize-config", a->normalize_config, "Normalization config JSON")->check(CLI::ExistingFile);
  sub->add_option("--nbest", a->nbest, "Also write ranked hypotheses as JSON lines");
  sub->add_option("--nbest-size", a->nbest_size, "Hypotheses per utterance in --nbest")->capture_default_str();
  sub->add_flag("--scores", a->scores, "Append the combined log score column");
  sub->add_flag("--lenient", a->lenient, "Renormalize frames instead of rejecting them");
  sub->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
