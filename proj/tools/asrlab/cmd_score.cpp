#include <iostream>

#include <json.hpp>

#include "asrlab/metrics.hpp"
#include "asrlab/report.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct ScoreArgs {
  std::vector<std::string> refs;
  std::vector<std::string> hyps;
  std::vector<std::string> langs;
  bool json = false;
  bool cer_ignore_spaces = false;
  bool allow_missing = false;
  bool normalize = false;
  std::string normalize_config;
  std::string out_json;
};

int run(const ScoreArgs& a) {
  if (a.refs.size() != a.hyps.size()) throw UsageError("--ref and --hyp must be given the same number of times");
  if (!a.langs.empty() && a.langs.size() != a.refs.size()) {
    throw UsageError("--lang must be given once per --ref/--hyp pair");
  }
  const auto norm = normalization_from_flags(a.normalize, a.normalize_config);
  CerOptions cer_opts;
  cer_opts.ignore_spaces = a.cer_ignore_spaces;

  RunReport report;
  bool missing = false;
  for (std::size_t k = 0; k < a.refs.size(); ++k) {
    const auto refs = read_id_text(a.refs[k]);
    const auto hyps = read_id_text(a.hyps[k]);
    std::vector<std::string> absent;
    std::vector<RefHyp> pairs;
    for (const auto& id : refs.ids) {
      auto it = hyps.text.find(id);
      if (it == hyps.text.end()) absent.push_back(id);
      std::string ref = refs.text.at(id);
      std::string hyp = it == hyps.text.end() ? "" : it->second;
      if (norm) {
        ref = normalize(ref, *norm);
        hyp = normalize(hyp, *norm);
      }
      pairs.push_back({std::move(ref), std::move(hyp)});
    }
    std::vector<std::string> extra;
    for (const auto& id : hyps.ids) {
      if (!refs.text.contains(id)) extra.push_back(id);
    }
    for (const auto& id : absent) log(a.hyps[k] + ": missing hypothesis for '" + id + "'");
    for (const auto& id : extra) log(a.hyps[k] + ": hypothesis '" + id + "' has no reference");
    if (!absent.empty() || !extra.empty()) missing = true;

    LanguageRow row;
    row.language = a.langs.empty() ? std::filesystem::path(a.refs[k]).stem().string() : a.langs[k];
    row.wer = corpus_rate(pairs, RateLevel::word);
    row.cer = corpus_rate(pairs, RateLevel::character, cer_opts);
    report.rows.push_back(std::move(row));
  }
  if (missing && !a.allow_missing) return kFailure;

  if (a.json) {
    auto j = to_json(report);
    j["macro_wer"] = report.macro_wer();
    j["macro_cer"] = report.macro_cer();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << render_markdown(report);
  }
  if (!a.out_json.empty()) write_file(a.out_json, to_json(report).dump(2) + "\n");
  return kOk;
}

}  // namespace

void setup_score(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<ScoreArgs>();
  auto* sub = app.add_subcommand("score", "WER/CER of hypotheses against references, per language and averaged");
  sub->add_option("--ref", a->refs, "Reference TSV (id<TAB>text); repeat per language")->required()->check(CLI::ExistingFile);
  sub->add_option("--hyp", a->hyps, "Hypothesis TSV; repeat per language")->required()->check(CLI::ExistingFile);
  sub->add_option("--lang", a->langs, "Language label; repeat per language");
  sub->add_flag("--json", a->json, "Print JSON instead of a Markdown table");
  sub->add_flag("--cer-ignore-spaces", a->cer_ignore_spaces, "Drop spaces before computing CER");
  sub->add_flag("--allow-missing", a->allow_missing, "Score missing hypotheses as empty instead of failing");
  sub->add_flag("--normalize", a->normalize, "Normalize references and hypotheses first");
  sub->add_option("--normalize-config", a->normalize_config, "Normalization config JSON")->check(CLI::ExistingFile);
  sub->add_option("--out-json", a->out_json, "Also write the per-language results as report JSON");
  sub->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
