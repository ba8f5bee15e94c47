#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asrlab/error.hpp"
#include "asrlab/normalize.hpp"

namespace asrlab::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

// Bad flag combinations detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

// The selected subcommand's action. Set by the subcommand callback.
using Action = std::function<int()>;

struct Context {
  Action action;
};

void setup_decode(CLI::App& app, Context& ctx);
void setup_score(CLI::App& app, Context& ctx);
void setup_lm(CLI::App& app, Context& ctx);
void setup_augment(CLI::App& app, Context& ctx);
void setup_hpo(CLI::App& app, Context& ctx);
void setup_sensitivity(CLI::App& app, Context& ctx);
void setup_report(CLI::App& app, Context& ctx);
void setup_tune(CLI::App& app, Context& ctx);

// JSON config files: nested objects per subcommand, option long names as
// keys.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

// `id<TAB>text[<TAB>...]` lines in file order; extra columns are ignored and
// duplicate ids are an error.
struct IdText {
  std::vector<std::string> ids;
  std::map<std::string, std::string> text;
};
IdText read_id_text(const std::filesystem::path& path);

// Writes to a temporary sibling, then renames.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Normalization chosen by --normalize / --normalize-config.
std::optional<NormalizationConfig> normalization_from_flags(bool flag, const std::string& config_path);

void log(const std::string& msg);

}  // namespace asrlab::cli
