#include "common.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "asrlab/text.hpp"

namespace asrlab::cli {

namespace {

nlohmann::json option_value(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  const auto num = nlohmann::json::parse(s, nullptr, false);
  if (num.is_number()) return num;
  return s;
}

void collect(const CLI::App* app, bool default_also, nlohmann::json& j) {
  for (const CLI::Option* opt : app->get_options({})) {
    if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
    const std::string name = opt->get_lnames()[0];
    if (opt->get_type_size() != 0) {
      if (opt->count() == 1) {
        j[name] = option_value(opt->results().at(0));
      } else if (opt->count() > 1) {
        j[name] = nlohmann::json::array();
        for (const auto& r : opt->results()) j[name].push_back(option_value(r));
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = option_value(opt->get_default_str());
      }
    } else if (opt->count() > 0) {
      j[name] = true;
    } else if (default_also) {
      j[name] = false;
    }
  }
  for (const CLI::App* sub : app->get_subcommands()) {
    nlohmann::json child = nlohmann::json::object();
    collect(sub, default_also, child);
    j[sub->get_name()] = std::move(child);
  }
}

void flatten(const nlohmann::json& j, const std::string& name, std::vector<std::string> parents,
             std::vector<CLI::ConfigItem>& out) {
  if (j.is_object()) {
    if (!name.empty()) parents.push_back(name);
    for (const auto& [k, v] : j.items()) flatten(v, k, parents, out);
    return;
  }
  if (name.empty()) throw CLI::ConversionError("config file must hold a JSON object");
  CLI::ConfigItem item;
  item.name = name;
  item.parents = parents;
  auto scalar = [&](const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value for " + name);
  };
  if (j.is_array()) {
    for (const auto& v : j) item.inputs.push_back(scalar(v));
  } else {
    item.inputs.push_back(scalar(j));
  }
  out.push_back(std::move(item));
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const {
  nlohmann::json j = nlohmann::json::object();
  collect(app, default_also, j);
  return j.dump();
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
  nlohmann::json j;
  try {
    input >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::ConversionError(std::string("config file: ") + e.what());
  }
  std::vector<CLI::ConfigItem> out;
  flatten(j, "", {}, out);
  return out;
}

IdText read_id_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  IdText r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    std::string id = tab == std::string::npos ? line : line.substr(0, tab);
    std::string body;
    if (tab != std::string::npos) {
      const auto end = line.find('\t', tab + 1);
      body = line.substr(tab + 1, end == std::string::npos ? std::string::npos : end - tab - 1);
    }
    if (id.empty()) throw ParseError(path.string() + ": empty id", lineno);
    if (!r.text.emplace(id, std::move(body)).second) {
      throw ParseError(path.string() + ": duplicate id '" + id + "'", lineno);
    }
    r.ids.push_back(std::move(id));
  }
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<NormalizationConfig> normalization_from_flags(bool flag, const std::string& config_path) {
  if (!config_path.empty()) return load_normalization_config(config_path);
  if (flag) return NormalizationConfig{};
  return std::nullopt;
}

void log(const std::string& msg) { std::cerr << "asrlab: " << msg << "\n"; }

}  // namespace asrlab::cli
