#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "asrlab/error.hpp"
#include "asrlab/rng.hpp"

namespace asrlab::hpo {

enum class ParamKind { uniform, loguniform, int_uniform, categorical };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::uniform;
  double low = 0.0;
  double high = 1.0;
  std::vector<std::string> choices;  // categorical only

  static ParamSpec uniform(std::string name, double low, double high);
  static ParamSpec loguniform(std::string name, double low, double high);
  static ParamSpec int_uniform(std::string name, std::int64_t low, std::int64_t high);
  static ParamSpec categorical(std::string name, std::vector<std::string> choices);

  bool continuous() const { return kind != ParamKind::categorical; }
  void validate() const;
};

using ParamValue = std::variant<double, std::int64_t, std::string>;
using ParamMap = std::map<std::string, ParamValue>;
using MetricMap = std::map<std::string, double>;

// Numeric view of a value; throws for strings.
double as_double(const ParamValue& v);

struct SearchSpace {
  std::vector<ParamSpec> params;

  // The six fine-tuning hyperparameters and their ranges: learning rate,
  // max updates, freeze updates, activation dropout, mask probabilities.
  static SearchSpace finetune_default();

  void validate() const;
  const ParamSpec& at(const std::string& name) const;
  std::size_t size() const { return params.size(); }
  // True when every parameter is present, typed correctly and in bounds.
  bool contains(const ParamMap& p) const;
};

// Maps between a parameter's domain and [0, 1]: linear for uniform and
// integer kinds, logarithmic for loguniform. Integers are not rounded.
double to_unit(const ParamSpec& p, double value);
double from_unit(const ParamSpec& p, double u);

enum class TrialState { complete, failed };
enum class Direction { minimize, maximize };
enum class SamplerKind { tpe, random };

struct Trial {
  std::size_t index = 0;
  ParamMap params;
  MetricMap metrics;
  TrialState state = TrialState::complete;
};

struct TpeOptions {
  double gamma = 0.25;
  int candidates = 24;
  int startup_trials = 10;
  double prior_weight = 1.0;
};

struct Study {
  SearchSpace space;
  std::string objective_metric = "objective";
  Direction direction = Direction::minimize;
  SamplerKind sampler = SamplerKind::tpe;
  std::uint64_t seed = 0;
  TpeOptions tpe;
  std::vector<Trial> trials;

  // Best complete trial carrying `metric`; ties go to the lowest index.
  // Throws when no complete trial has the metric.
  const Trial& best_by(const std::string& metric, Direction dir) const;
  const Trial& best() const { return best_by(objective_metric, direction); }
  std::size_t complete_count() const;
};

// Draws one configuration. The random stream is derived from (seed, stream)
// so a suggestion depends only on the seed, the stream number and the
// trial history. Default stream: the next trial index.
ParamMap suggest(const Study& study, SamplerKind sampler);
ParamMap suggest(const Study& study, SamplerKind sampler, std::uint64_t stream);

// Objective: returns metrics, or std::nullopt / throws for a failed trial.
using Objective = std::function<std::optional<MetricMap>(const ParamMap&)>;

// The objective's executable could not be found. Unlike other objective
// failures this aborts the study.
class ObjectiveMissing : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::string objective_metric = "objective";
  Direction direction = Direction::minimize;
  TpeOptions tpe;
  // Configurations evaluated first, before any sampled ones.
  std::vector<ParamMap> enqueued;
  // Number of suggestions drawn from the same history snapshot and
  // evaluated concurrently. Results are appended in suggestion order, so a
  // study is reproducible from (seed, parallelism).
  std::size_t parallelism = 1;
};

Study run_study(const SearchSpace& space, const Objective& objective, std::size_t trials,
                SamplerKind sampler, std::uint64_t seed, const RunOptions& opts = {});

// Runs `command` through the shell with the parameters as a JSON object on
// stdin; stdout must be a JSON object of numeric metrics. Non-zero exit or
// unparsable output marks the trial failed; exit status 127 throws
// ObjectiveMissing.
Objective command_objective(std::string command);

// JSON encodings.
nlohmann::json to_json(const SearchSpace& s);
SearchSpace space_from_json(const nlohmann::json& j);
SearchSpace load_space(const std::filesystem::path& path);
nlohmann::json params_to_json(const ParamMap& p);
ParamMap params_from_json(const SearchSpace& space, const nlohmann::json& j);

// Header line followed by one JSON object per trial.
void save_study(const Study& study, const std::filesystem::path& path);
Study load_study(const std::filesystem::path& path);
std::string serialize_study(const Study& study);
Study parse_study(const std::string& jsonl);

std::string_view to_string(ParamKind k);
std::string_view to_string(Direction d);
std::string_view to_string(SamplerKind s);
Direction parse_direction(std::string_view s);
SamplerKind parse_sampler(std::string_view s);

}  // namespace asrlab::hpo
