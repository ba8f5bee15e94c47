#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "asrlab/corpus.hpp"
#include "asrlab/sensitivity.hpp"

namespace asrlab {

struct LanguageRow {
  std::string language;
  double wer = 0.0;  // percent
  double cer = 0.0;  // percent
  std::string config;
};

struct RunReport {
  std::vector<LanguageRow> rows;

  bool empty() const { return rows.empty(); }
  double macro_wer() const;
  double macro_cer() const;
};

nlohmann::json to_json(const RunReport& r);
RunReport run_report_from_json(const nlohmann::json& j);

// Language | WER | CER | Config, then an "Average" row.
std::string render_markdown(const RunReport& r);
std::string render_csv(const RunReport& r);

// Parameter | S1 | ST, rows ordered by rank_by_st.
std::string render_markdown(const SobolResult& r);
std::string render_csv(const SobolResult& r);

struct CorpusRow {
  std::string language;
  ManifestStats stats;
};

// Train (primary, speed augm., external, total), dev and test hours per
// language.
std::string render_markdown(std::span<const CorpusRow> rows);
std::string render_csv(std::span<const CorpusRow> rows);

// {"languages": [{"name": ..., "manifests": [{"path", "split", "source"}]}]};
// manifest paths are relative to the description file.
std::vector<CorpusRow> load_corpus_description(const std::filesystem::path& path);

// Two decimals, "-" for an empty cell.
std::string format_fixed(double v, int decimals = 2);

}  // namespace asrlab
