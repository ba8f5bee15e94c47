#include <algorithm>
#include <iostream>

#include "asrlab/ctc.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct TuneArgs {
  std::string emissions;
  std::string refs;
  std::string lm;
  std::string lm_level = "word";
  std::size_t trials = 50;
  std::size_t beam_width = 128;
  std::uint64_t seed = 0;
  bool include_baseline = false;
  std::string normalize_config;
  std::string out;
  std::string study;
};

int run(const TuneArgs& a) {
  const auto refs = read_id_text(a.refs);
  std::vector<DevUtterance> dev;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(a.emissions)) {
    if (e.is_regular_file() && e.path().extension() == ".emx") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto em = read_emissions(f);
    auto it = refs.text.find(em.utterance_id());
    if (it == refs.text.end()) throw Error("no reference for '" + em.utterance_id() + "'");
    dev.push_back({std::move(em), it->second});
  }
  if (dev.empty()) throw Error("no dev emissions in " + a.emissions);

  TuneOptions opts;
  opts.trials = a.trials;
  opts.beam_width = a.beam_width;
  opts.seed = a.seed;
  opts.include_baseline = a.include_baseline;
  opts.lm_level = a.lm_level == "char" ? LmLevel::character : LmLevel::word;
  if (!a.normalize_config.empty()) opts.normalize_cfg = load_normalization_config(a.normalize_config);
  const auto lm = std::make_shared<const ArpaLanguageModel>(read_arpa(std::filesystem::path(a.lm)));
  const auto r = tune_alpha_beta(dev, lm, opts);

  DecodeConfig base;
  base.beam_width = a.beam_width;
  base.lm = lm;
  base.lm_level = opts.lm_level;
  const double baseline = dev_wer(dev, base, opts.normalize_cfg);

  const nlohmann::json j = {{"alpha", r.alpha}, {"beta", r.beta}, {"dev_wer", r.dev_wer},
                            {"baseline_dev_wer", baseline}, {"trials", r.study.trials.size()}};
  if (!a.out.empty()) write_file(a.out, j.dump(2) + "\n");
  if (!a.study.empty()) hpo::save_study(r.study, a.study);
  std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

void setup_tune(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<TuneArgs>();
  auto* sub = app.add_subcommand("tune-ab", "Bayesian search of the LM weight and word bonus on a dev set");
  sub->add_option("--emissions", a->emissions, "Directory of dev .emx files")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--refs", a->refs, "Dev references TSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--lm", a->lm, "ARPA language model")->required()->check(CLI::ExistingFile);
  sub->add_option("--lm-level", a->lm_level, "word or char")->check(CLI::IsMember({"word", "char"}))->capture_default_str();
  sub->add_option("--trials", a->trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--beam-width", a->beam_width, "Beam width")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", a->seed, "Random seed")->capture_default_str();
  sub->add_flag("--include-baseline", a->include_baseline, "Evaluate alpha = beta = 0 as the first trial");
  sub->add_option("--normalize-config", a->normalize_config, "Normalization config JSON")->check(CLI::ExistingFile);
  sub->add_option("--out", a->out, "Result JSON");
  sub->add_option("--study", a->study, "Also save the study as JSON lines");
  sub->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
