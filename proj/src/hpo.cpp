#include "asrlab/hpo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include <sys/wait.h>
#include <unistd.h>

#include "asrlab/kernels.hpp"

namespace asrlab::hpo {

// ---------------------------------------------------------------------------
// Parameters and spaces

ParamSpec ParamSpec::uniform(std::string name, double low, double high) {
  return {std::move(name), ParamKind::uniform, low, high, {}};
}
ParamSpec ParamSpec::loguniform(std::string name, double low, double high) {
  return {std::move(name), ParamKind::loguniform, low, high, {}};
}
ParamSpec ParamSpec::int_uniform(std::string name, std::int64_t low, std::int64_t high) {
  return {std::move(name), ParamKind::int_uniform, static_cast<double>(low), static_cast<double>(high), {}};
}
ParamSpec ParamSpec::categorical(std::string name, std::vector<std::string> choices) {
  return {std::move(name), ParamKind::categorical, 0.0, 0.0, std::move(choices)};
}

void ParamSpec::validate() const {
  if (name.empty()) throw InvalidArgument("parameter with empty name");
  switch (kind) {
    case ParamKind::categorical:
      if (choices.empty()) throw InvalidArgument("categorical parameter '" + name + "' has no choices");
      return;
    case ParamKind::loguniform:
      if (!(low > 0.0)) throw InvalidArgument("loguniform parameter '" + name + "' needs low > 0");
      [[fallthrough]];
    case ParamKind::uniform:
    case ParamKind::int_uniform:
      if (!(std::isfinite(low) && std::isfinite(high) && low < high)) {
        throw InvalidArgument("parameter '" + name + "' needs finite low < high");
      }
      if (kind == ParamKind::int_uniform && (low != std::floor(low) || high != std::floor(high))) {
        throw InvalidArgument("integer parameter '" + name + "' needs integral bounds");
      }
      return;
  }
}

double as_double(const ParamValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw InvalidArgument("categorical value has no numeric view");
}

SearchSpace SearchSpace::finetune_default() {
  SearchSpace s;
  s.params = {
      ParamSpec::loguniform("learning_rate", 1e-6, 1e-3),
      ParamSpec::int_uniform("max_updates", 10000, 100000),
      ParamSpec::int_uniform("freeze_finetune_updates", 0, 50000),
      ParamSpec::uniform("activation_dropout", 0.01, 0.2),
      ParamSpec::uniform("mask_prob", 0.2, 0.7),
      ParamSpec::uniform("mask_channel_prob", 0.1, 0.7),
  };
  return s;
}

void SearchSpace::validate() const {
  std::unordered_set<std::string> names;
  for (const auto& p : params) {
    p.validate();
    if (!names.insert(p.name).second) throw InvalidArgument("duplicate parameter name '" + p.name + "'");
  }
}

const ParamSpec& SearchSpace::at(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw InvalidArgument("unknown parameter '" + name + "'");
}

bool SearchSpace::contains(const ParamMap& values) const {
  if (values.size() != params.size()) return false;
  for (const auto& p : params) {
    auto it = values.find(p.name);
    if (it == values.end()) return false;
    const auto& v = it->second;
    switch (p.kind) {
      case ParamKind::categorical: {
        const auto* s = std::get_if<std::string>(&v);
        if (!s || std::find(p.choices.begin(), p.choices.end(), *s) == p.choices.end()) return false;
        break;
      }
      case ParamKind::int_uniform: {
        const auto* i = std::get_if<std::int64_t>(&v);
        if (!i || *i < static_cast<std::int64_t>(p.low) || *i > static_cast<std::int64_t>(p.high)) return false;
        break;
      }
      default: {
        const auto* d = std::get_if<double>(&v);
        if (!d || !(*d >= p.low && *d <= p.high)) return false;
      }
    }
  }
  return true;
}

double to_unit(const ParamSpec& p, double value) {
  switch (p.kind) {
    case ParamKind::loguniform:
      return (std::log(value) - std::log(p.low)) / (std::log(p.high) - std::log(p.low));
    case ParamKind::categorical:
      throw InvalidArgument("categorical parameter '" + p.name + "' has no unit mapping");
    default:
      return (value - p.low) / (p.high - p.low);
  }
}

double from_unit(const ParamSpec& p, double u) {
  switch (p.kind) {
    case ParamKind::loguniform: {
      const double v = std::exp(std::log(p.low) + u * (std::log(p.high) - std::log(p.low)));
      return std::clamp(v, p.low, p.high);
    }
    case ParamKind::categorical:
      throw InvalidArgument("categorical parameter '" + p.name + "' has no unit mapping");
    default:
      return p.low + u * (p.high - p.low);
  }
}

// ---------------------------------------------------------------------------
// Studies

const Trial& Study::best_by(const std::string& metric, Direction dir) const {
  const Trial* best = nullptr;
  for (const auto& t : trials) {
    if (t.state != TrialState::complete) continue;
    auto it = t.metrics.find(metric);
    if (it == t.metrics.end() || std::isnan(it->second)) continue;
    if (!best) {
      best = &t;
      continue;
    }
    const double cur = best->metrics.at(metric);
    const bool better = dir == Direction::minimize ? it->second < cur : it->second > cur;
    if (better) best = &t;
  }
  if (!best) throw Error("no complete trial reports metric '" + metric + "'");
  return *best;
}

std::size_t Study::complete_count() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const Trial& t) {
    return t.state == TrialState::complete;
  }));
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

// Coordinates in which the samplers work: log for loguniform, a half-unit
// widened interval for integers so every integer gets equal mass.
struct Domain {
  double lo, hi;
};

Domain internal_domain(const ParamSpec& p) {
  switch (p.kind) {
    case ParamKind::loguniform: return {std::log(p.low), std::log(p.high)};
    case ParamKind::int_uniform: return {p.low - 0.5, p.high + 0.5};
    default: return {p.low, p.high};
  }
}

double to_internal(const ParamSpec& p, const ParamValue& v) {
  const double x = as_double(v);
  return p.kind == ParamKind::loguniform ? std::log(x) : x;
}

ParamValue from_internal(const ParamSpec& p, double x) {
  switch (p.kind) {
    case ParamKind::loguniform: return std::clamp(std::exp(x), p.low, p.high);
    case ParamKind::int_uniform: {
      const double r = std::clamp(std::round(x), p.low, p.high);
      return static_cast<std::int64_t>(r);
    }
    default: return std::clamp(x, p.low, p.high);
  }
}

ParamValue sample_random(const ParamSpec& p, Rng& rng) {
  if (p.kind == ParamKind::categorical) return p.choices[rng.below(p.choices.size())];
  const Domain d = internal_domain(p);
  return from_internal(p, rng.uniform(d.lo, d.hi));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Adaptive-bandwidth Parzen estimator over a bounded interval: one truncated
// Gaussian per observation plus a broad prior component at the centre.
class ParzenEstimator {
 public:
  ParzenEstimator(std::vector<double> obs, Domain d, double prior_weight) : dom_(d) {
    const double range = d.hi - d.lo;
    const double prior_mu = 0.5 * (d.lo + d.hi);
    std::sort(obs.begin(), obs.end());
    std::vector<double> mus = obs;
    // Insert the prior in sorted position so neighbour gaps see it.
    auto pos = std::lower_bound(mus.begin(), mus.end(), prior_mu);
    const auto prior_idx = static_cast<std::size_t>(pos - mus.begin());
    mus.insert(pos, prior_mu);
    const std::size_t n = mus.size();
    sigmas_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i == 0 ? mus[i] - d.lo : mus[i] - mus[i - 1];
      const double right = i + 1 == n ? d.hi - mus[i] : mus[i + 1] - mus[i];
      sigmas_[i] = std::max(left, right);
    }
    const double min_sigma = range / std::min(100.0, 1.0 + static_cast<double>(obs.size()));
    for (auto& s : sigmas_) s = std::clamp(s, min_sigma, range);
    sigmas_[prior_idx] = range;
    mus_ = std::move(mus);
    weights_.assign(n, 1.0);
    weights_[prior_idx] = prior_weight;
    double total = 0.0;
    for (double w : weights_) total += w;
    log_norm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      weights_[i] /= total;
      const double mass =
          normal_cdf((d.hi - mus_[i]) / sigmas_[i]) - normal_cdf((d.lo - mus_[i]) / sigmas_[i]);
      log_norm_[i] = std::log(weights_[i]) - std::log(std::max(mass, 1e-300)) -
                     std::log(sigmas_[i] * std::sqrt(2.0 * std::numbers::pi));
    }
  }

  double sample(Rng& rng) const {
    double u = rng.uniform();
    std::size_t k = 0;
    while (k + 1 < weights_.size() && u >= weights_[k]) {
      u -= weights_[k];
      ++k;
    }
    for (int tries = 0; tries < 100; ++tries) {
      const double x = mus_[k] + sigmas_[k] * rng.normal();
      if (x >= dom_.lo && x <= dom_.hi) return x;
    }
    return std::clamp(mus_[k], dom_.lo, dom_.hi);
  }

  double log_pdf(double x) const {
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(mus_.size());
    for (std::size_t i = 0; i < mus_.size(); ++i) {
      const double z = (x - mus_[i]) / sigmas_[i];
      terms[i] = log_norm_[i] - 0.5 * z * z;
      mx = std::max(mx, terms[i]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
  }

 private:
  Domain dom_;
  std::vector<double> mus_, sigmas_, weights_, log_norm_;
};

ParamValue sample_tpe_param(const ParamSpec& p, const std::vector<const Trial*>& good,
                            const std::vector<const Trial*>& bad, const TpeOptions& opt, Rng& rng) {
  if (p.kind == ParamKind::categorical) {
    const std::size_t k = p.choices.size();
    auto weights = [&](const std::vector<const Trial*>& ts) {
      std::vector<double> w(k, opt.prior_weight / static_cast<double>(k));
      for (const Trial* t : ts) {
        const auto& s = std::get<std::string>(t->params.at(p.name));
        const auto idx = std::find(p.choices.begin(), p.choices.end(), s) - p.choices.begin();
        if (idx < static_cast<std::ptrdiff_t>(k)) w[static_cast<std::size_t>(idx)] += 1.0;
      }
      double total = 0.0;
      for (double x : w) total += x;
      for (double& x : w) x /= total;
      return w;
    };
    const auto l = weights(good);
    const auto g = weights(bad);
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < opt.candidates; ++c) {
      double u = rng.uniform();
      std::size_t idx = 0;
      while (idx + 1 < k && u >= l[idx]) {
        u -= l[idx];
        ++idx;
      }
      const double score = std::log(l[idx]) - std::log(g[idx]);
      if (score > best_score) {
        best_score = score;
        best = idx;
      }
    }
    return p.choices[best];
  }

  const Domain d = internal_domain(p);
  auto values = [&](const std::vector<const Trial*>& ts) {
    std::vector<double> v;
    v.reserve(ts.size());
    for (const Trial* t : ts) v.push_back(to_internal(p, t->params.at(p.name)));
    return v;
  };
  const ParzenEstimator l(values(good), d, opt.prior_weight);
  const ParzenEstimator g(values(bad), d, opt.prior_weight);
  double best_x = 0.0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < opt.candidates; ++c) {
    const double x = l.sample(rng);
    const double score = l.log_pdf(x) - g.log_pdf(x);
    if (score > best_score) {
      best_score = score;
      best_x = x;
    }
  }
  return from_internal(p, best_x);
}

}  // namespace

ParamMap suggest(const Study& study, SamplerKind sampler) {
  return suggest(study, sampler, study.trials.size());
}

ParamMap suggest(const Study& study, SamplerKind sampler, std::uint64_t stream) {
  study.space.validate();
  Rng rng(mix_seed(study.seed, stream));
  ParamMap out;

  std::vector<const Trial*> usable;
  for (const auto& t : study.trials) {
    if (t.state != TrialState::complete) continue;
    auto it = t.metrics.find(study.objective_metric);
    if (it == t.metrics.end() || std::isnan(it->second)) continue;
    if (!study.space.contains(t.params)) continue;
    usable.push_back(&t);
  }

  if (sampler == SamplerKind::random || static_cast<int>(usable.size()) < study.tpe.startup_trials ||
      usable.size() < 2) {
    for (const auto& p : study.space.params) out[p.name] = sample_random(p, rng);
    return out;
  }

  const double sign = study.direction == Direction::minimize ? 1.0 : -1.0;
  std::stable_sort(usable.begin(), usable.end(), [&](const Trial* a, const Trial* b) {
    return sign * a->metrics.at(study.objective_metric) < sign * b->metrics.at(study.objective_metric);
  });
  const auto n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(study.tpe.gamma * static_cast<double>(usable.size()))));
  const std::vector<const Trial*> good(usable.begin(), usable.begin() + static_cast<std::ptrdiff_t>(n_good));
  const std::vector<const Trial*> bad(usable.begin() + static_cast<std::ptrdiff_t>(n_good), usable.end());
  for (const auto& p : study.space.params) out[p.name] = sample_tpe_param(p, good, bad, study.tpe, rng);
  return out;
}

Study run_study(const SearchSpace& space, const Objective& objective, std::size_t trials,
                SamplerKind sampler, std::uint64_t seed, const RunOptions& opts) {
  if (trials < 1) throw InvalidArgument("a study needs at least one trial");
  space.validate();
  Study study;
  study.space = space;
  study.objective_metric = opts.objective_metric;
  study.direction = opts.direction;
  study.sampler = sampler;
  study.seed = seed;
  study.tpe = opts.tpe;

  const std::size_t width = std::max<std::size_t>(1, opts.parallelism);
  while (study.trials.size() < trials) {
    const std::size_t base = study.trials.size();
    const std::size_t batch = std::min(width, trials - base);
    std::vector<ParamMap> configs;
    for (std::size_t j = 0; j < batch; ++j) {
      const std::size_t idx = base + j;
      if (idx < opts.enqueued.size()) {
        if (!space.contains(opts.enqueued[idx])) throw InvalidArgument("enqueued configuration outside the space");
        configs.push_back(opts.enqueued[idx]);
      } else {
        configs.push_back(suggest(study, sampler, idx));
      }
    }
    auto results = kernels::evaluate_objective(objective, configs);
    for (std::size_t j = 0; j < batch; ++j) {
      Trial t;
      t.index = base + j;
      t.params = std::move(configs[j]);
      if (results[j] && results[j]->contains(study.objective_metric)) {
        t.metrics = std::move(*results[j]);
        t.state = TrialState::complete;
      } else {
        if (results[j]) t.metrics = std::move(*results[j]);
        t.state = TrialState::failed;
      }
      study.trials.push_back(std::move(t));
    }
  }
  return study;
}

// ---------------------------------------------------------------------------
// External command objective

Objective command_objective(std::string command) {
  return [command = std::move(command)](const ParamMap& params) -> std::optional<MetricMap> {
    char tmpl[] = "/tmp/asrlab-params-XXXXXX";
    const int fd = ::mkstemp(tmpl);
    if (fd < 0) throw IoError("cannot create temporary parameter file");
    const std::string payload = params_to_json(params).dump();
    const bool wrote = ::write(fd, payload.data(), payload.size()) == static_cast<ssize_t>(payload.size());
    ::close(fd);
    if (!wrote) {
      ::unlink(tmpl);
      throw IoError("cannot write temporary parameter file");
    }
    const std::string full = "{ " + command + "\n} < '" + tmpl + "'";
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) {
      ::unlink(tmpl);
      throw IoError("cannot start objective command");
    }
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = ::pclose(pipe);
    ::unlink(tmpl);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
      throw ObjectiveMissing("objective command not found: " + command);
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
    MetricMap metrics;
    try {
      const auto j = nlohmann::json::parse(out);
      if (!j.is_object()) return std::nullopt;
      for (const auto& [k, v] : j.items()) {
        if (v.is_number()) metrics[k] = v.get<double>();
      }
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
    return metrics;
  };
}

// ---------------------------------------------------------------------------
// JSON

std::string_view to_string(ParamKind k) {
  switch (k) {
    case ParamKind::uniform: return "uniform";
    case ParamKind::loguniform: return "loguniform";
    case ParamKind::int_uniform: return "int_uniform";
    case ParamKind::categorical: return "categorical";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::minimize ? "minimize" : "maximize"; }
std::string_view to_string(SamplerKind s) { return s == SamplerKind::tpe ? "tpe" : "random"; }

Direction parse_direction(std::string_view s) {
  if (s == "minimize") return Direction::minimize;
  if (s == "maximize") return Direction::maximize;
  throw InvalidArgument("unknown direction '" + std::string(s) + "'");
}

SamplerKind parse_sampler(std::string_view s) {
  if (s == "tpe") return SamplerKind::tpe;
  if (s == "random") return SamplerKind::random;
  throw InvalidArgument("unknown sampler '" + std::string(s) + "'");
}

namespace {
ParamKind parse_kind(std::string_view s) {
  if (s == "uniform") return ParamKind::uniform;
  if (s == "loguniform") return ParamKind::loguniform;
  if (s == "int_uniform" || s == "int") return ParamKind::int_uniform;
  if (s == "categorical") return ParamKind::categorical;
  throw InvalidArgument("unknown parameter kind '" + std::string(s) + "'");
}
}  // namespace

nlohmann::json to_json(const SearchSpace& s) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : s.params) {
    nlohmann::json j = {{"name", p.name}, {"kind", std::string(to_string(p.kind))}};
    if (p.kind == ParamKind::categorical) {
      j["choices"] = p.choices;
    } else if (p.kind == ParamKind::int_uniform) {
      j["low"] = static_cast<std::int64_t>(p.low);
      j["high"] = static_cast<std::int64_t>(p.high);
    } else {
      j["low"] = p.low;
      j["high"] = p.high;
    }
    params.push_back(std::move(j));
  }
  return {{"params", params}};
}

SearchSpace space_from_json(const nlohmann::json& j) {
  SearchSpace s;
  try {
    for (const auto& pj : j.at("params")) {
      ParamSpec p;
      p.name = pj.at("name").get<std::string>();
      p.kind = parse_kind(pj.at("kind").get<std::string>());
      if (p.kind == ParamKind::categorical) {
        p.choices = pj.at("choices").get<std::vector<std::string>>();
      } else {
        p.low = pj.at("low").get<double>();
        p.high = pj.at("high").get<double>();
      }
      s.params.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("search space: ") + e.what());
  }
  s.validate();
  return s;
}

SearchSpace load_space(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return space_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

nlohmann::json params_to_json(const ParamMap& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p) {
    std::visit([&](const auto& x) { j[k] = x; }, v);
  }
  return j;
}

ParamMap params_from_json(const SearchSpace& space, const nlohmann::json& j) {
  ParamMap out;
  for (const auto& p : space.params) {
    if (!j.contains(p.name)) throw ParseError("missing parameter '" + p.name + "'");
    const auto& v = j.at(p.name);
    switch (p.kind) {
      case ParamKind::categorical: out[p.name] = v.get<std::string>(); break;
      case ParamKind::int_uniform: out[p.name] = v.get<std::int64_t>(); break;
      default: out[p.name] = v.get<double>();
    }
  }
  return out;
}

std::string serialize_study(const Study& study) {
  nlohmann::json header = {
      {"format", "asrlab-study-v1"},
      {"space", to_json(study.space)},
      {"objective_metric", study.objective_metric},
      {"direction", std::string(to_string(study.direction))},
      {"sampler", std::string(to_string(study.sampler))},
      {"seed", study.seed},
      {"tpe",
       {{"gamma", study.tpe.gamma},
        {"candidates", study.tpe.candidates},
        {"startup_trials", study.tpe.startup_trials},
        {"prior_weight", study.tpe.prior_weight}}},
  };
  std::string out = header.dump() + "\n";
  for (const auto& t : study.trials) {
    nlohmann::json j = {{"index", t.index},
                        {"params", params_to_json(t.params)},
                        {"metrics", t.metrics},
                        {"state", t.state == TrialState::complete ? "complete" : "failed"}};
    out += j.dump() + "\n";
  }
  return out;
}

Study parse_study(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line;
  std::size_t lineno = 0;
  Study s;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("study: ") + e.what(), lineno);
    }
    try {
      if (!have_header) {
        if (j.value("format", "") != "asrlab-study-v1") throw ParseError("study: unknown format", lineno);
        s.space = space_from_json(j.at("space"));
        s.objective_metric = j.at("objective_metric").get<std::string>();
        s.direction = parse_direction(j.at("direction").get<std::string>());
        s.sampler = parse_sampler(j.at("sampler").get<std::string>());
        s.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tpe")) {
          const auto& t = j["tpe"];
          s.tpe.gamma = t.at("gamma").get<double>();
          s.tpe.candidates = t.at("candidates").get<int>();
          s.tpe.startup_trials = t.at("startup_trials").get<int>();
          s.tpe.prior_weight = t.at("prior_weight").get<double>();
        }
        have_header = true;
        continue;
      }
      Trial t;
      t.index = j.at("index").get<std::size_t>();
      if (t.index != s.trials.size()) throw ParseError("study: trial indices must be dense", lineno);
      t.params = params_from_json(s.space, j.at("params"));
      t.metrics = j.at("metrics").get<MetricMap>();
      const auto state = j.at("state").get<std::string>();
      if (state != "complete" && state != "failed") throw ParseError("study: bad trial state", lineno);
      t.state = state == "complete" ? TrialState::complete : TrialState::failed;
      s.trials.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("study: ") + e.what(), lineno);
    }
  }
  if (!have_header) throw ParseError("study: missing header line");
  return s;
}

void save_study(const Study& study, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << serialize_study(study);
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Study load_study(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_study(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace asrlab::hpo
