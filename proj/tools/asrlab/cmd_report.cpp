#include <fstream>
#include <iostream>

#include "asrlab/report.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct ReportArgs {
  std::string results;
  std::string sensitivity;
  std::string corpus;
  std::string format = "md";
  std::string out;
};

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

int run(const ReportArgs& a) {
  if (a.results.empty() && a.sensitivity.empty() && a.corpus.empty()) {
    throw UsageError("give at least one of --results, --sensitivity, --corpus");
  }
  const bool md = a.format == "md";
  std::vector<std::string> sections;
  if (!a.corpus.empty()) {
    const auto rows = load_corpus_description(a.corpus);
    if (!rows.empty()) sections.push_back(md ? render_markdown(std::span<const CorpusRow>(rows)) : render_csv(std::span<const CorpusRow>(rows)));
  }
  if (!a.results.empty()) {
    const auto r = run_report_from_json(load_json(a.results));
    if (!r.empty()) sections.push_back(md ? render_markdown(r) : render_csv(r));
  }
  if (!a.sensitivity.empty()) {
    const auto r = sobol_result_from_json(load_json(a.sensitivity));
    if (!r.params.empty()) sections.push_back(md ? render_markdown(r) : render_csv(r));
  }
  if (sections.empty()) {
    log("nothing to report");
    return kFailure;
  }
  std::string doc;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (i) doc += "\n";
    doc += sections[i];
  }
  if (a.out.empty()) {
    std::cout << doc;
  } else {
    write_file(a.out, doc);
  }
  return kOk;
}

}  // namespace

void setup_report(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<ReportArgs>();
  auto* sub = app.add_subcommand("report", "Render result, sensitivity and corpus tables");
  sub->add_option("--results", a->results, "Per-language WER/CER JSON")->check(CLI::ExistingFile);
  sub->add_option("--sensitivity", a->sensitivity, "Sobol' result JSON")->check(CLI::ExistingFile);
  sub->add_option("--corpus", a->corpus, "Corpus description JSON")->check(CLI::ExistingFile);
  sub->add_option("--format", a->format, "md or csv")->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  sub->add_option("--out", a->out, "Output file (default: stdout)");
  sub->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
