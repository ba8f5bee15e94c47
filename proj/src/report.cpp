#include "asrlab/report.hpp"

#include <cstdio>
#include <fstream>

#include "asrlab/error.hpp"
#include "asrlab/metrics.hpp"

namespace asrlab {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  // "-0.00" renders as "0.00".
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

namespace {

std::vector<double> column(const RunReport& r, double LanguageRow::*field) {
  std::vector<double> v;
  v.reserve(r.rows.size());
  for (const auto& row : r.rows) v.push_back(row.*field);
  return v;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string hours_cell(const SplitCell& c) { return c.utterances ? format_fixed(c.hours()) : "-"; }

}  // namespace

double RunReport::macro_wer() const { return macro_average(column(*this, &LanguageRow::wer)); }
double RunReport::macro_cer() const { return macro_average(column(*this, &LanguageRow::cer)); }

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"language", row.language}, {"wer", row.wer}, {"cer", row.cer}, {"config", row.config}});
  }
  return {{"rows", rows}};
}

RunReport run_report_from_json(const nlohmann::json& j) {
  RunReport r;
  try {
    for (const auto& rj : j.at("rows")) {
      LanguageRow row;
      row.language = rj.at("language").get<std::string>();
      row.wer = rj.at("wer").get<double>();
      row.cer = rj.at("cer").get<double>();
      if (rj.contains("config")) {
        const auto& c = rj["config"];
        row.config = c.is_string() ? c.get<std::string>() : c.dump();
      }
      r.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run report: ") + e.what());
  }
  return r;
}

std::string render_markdown(const RunReport& r) {
  std::string out = "| Language | WER | CER | Config |\n|---|---:|---:|---|\n";
  for (const auto& row : r.rows) {
    out += "| " + md_cell(row.language) + " | " + format_fixed(row.wer) + " | " + format_fixed(row.cer) + " | " +
           md_cell(row.config) + " |\n";
  }
  if (!r.empty()) {
    out += "| Average | " + format_fixed(r.macro_wer()) + " | " + format_fixed(r.macro_cer()) + " |  |\n";
  }
  return out;
}

std::string render_csv(const RunReport& r) {
  std::string out = "language,wer,cer,config\n";
  for (const auto& row : r.rows) {
    out += csv_field(row.language) + "," + format_fixed(row.wer) + "," + format_fixed(row.cer) + "," +
           csv_field(row.config) + "\n";
  }
  if (!r.empty()) out += "Average," + format_fixed(r.macro_wer()) + "," + format_fixed(r.macro_cer()) + ",\n";
  return out;
}

namespace {
const SobolIndex& find_index(const SobolResult& r, const std::string& name) {
  for (const auto& p : r.params)
    if (p.name == name) return p;
  throw InvalidArgument("unknown parameter " + name);
}
}  // namespace

std::string render_markdown(const SobolResult& r) {
  std::string out = "| Parameter | S1 | ST |\n|---|---:|---:|\n";
  for (const auto& name : rank_by_st(r)) {
    const auto& p = find_index(r, name);
    out += "| " + md_cell(name) + " | " + format_fixed(p.s1) + " | " + format_fixed(p.st) + " |\n";
  }
  return out;
}

std::string render_csv(const SobolResult& r) {
  std::string out = "parameter,S1,ST,S1_lo,S1_hi,ST_lo,ST_hi\n";
  for (const auto& name : rank_by_st(r)) {
    const auto& p = find_index(r, name);
    out += csv_field(name) + "," + format_fixed(p.s1) + "," + format_fixed(p.st) + "," + format_fixed(p.s1_lo) +
           "," + format_fixed(p.s1_hi) + "," + format_fixed(p.st_lo) + "," + format_fixed(p.st_hi) + "\n";
  }
  return out;
}

std::string render_markdown(std::span<const CorpusRow> rows) {
  std::string out =
      "| Language | Train primary | Train speed augm. | Train external | Train total | Dev | Test |\n"
      "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& row : rows) {
    const auto& s = row.stats;
    out += "| " + md_cell(row.language) + " | " + hours_cell(s.cell(Split::train, Source::primary)) + " | " +
           hours_cell(s.cell(Split::train, Source::speed_augm)) + " | " +
           hours_cell(s.cell(Split::train, Source::external)) + " | " + hours_cell(s.split_total(Split::train)) +
           " | " + hours_cell(s.split_total(Split::dev)) + " | " + hours_cell(s.split_total(Split::test)) + " |\n";
  }
  return out;
}

std::string render_csv(std::span<const CorpusRow> rows) {
  std::string out = "language,train_primary_h,train_speed_augm_h,train_external_h,train_total_h,dev_h,test_h\n";
  for (const auto& row : rows) {
    const auto& s = row.stats;
    out += csv_field(row.language) + "," + hours_cell(s.cell(Split::train, Source::primary)) + "," +
           hours_cell(s.cell(Split::train, Source::speed_augm)) + "," +
           hours_cell(s.cell(Split::train, Source::external)) + "," + hours_cell(s.split_total(Split::train)) + "," +
           hours_cell(s.split_total(Split::dev)) + "," + hours_cell(s.split_total(Split::test)) + "\n";
  }
  return out;
}

std::vector<CorpusRow> load_corpus_description(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  std::vector<CorpusRow> rows;
  try {
    for (const auto& lj : j.at("languages")) {
      CorpusRow row;
      row.language = lj.at("name").get<std::string>();
      for (const auto& mj : lj.at("manifests")) {
        std::filesystem::path mp = mj.at("path").get<std::string>();
        if (mp.is_relative()) mp = base / mp;
        ManifestReadOptions opts;
        opts.source = parse_source(mj.value("source", "primary"));
        row.stats += manifest_stats(read_manifest(mp, parse_split(mj.at("split").get<std::string>()), opts));
      }
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return rows;
}

}  // namespace asrlab
