#include <iostream>

#include "asrlab/hpo.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct HpoArgs {
  std::string space;
  std::size_t trials = 50;
  std::string sampler = "tpe";
  std::uint64_t seed = 0;
  std::string cmd;
  std::string metric = "objective";
  std::string direction = "minimize";
  std::string out;
  std::size_t parallel = 1;
  std::vector<std::string> best_by;
};

int run(const HpoArgs& a) {
  const auto space = a.space.empty() ? hpo::SearchSpace::finetune_default() : hpo::load_space(a.space);
  hpo::RunOptions opts;
  opts.objective_metric = a.metric;
  opts.direction = hpo::parse_direction(a.direction);
  opts.parallelism = a.parallel;
  const auto study =
      hpo::run_study(space, hpo::command_objective(a.cmd), a.trials, hpo::parse_sampler(a.sampler), a.seed, opts);
  if (!a.out.empty()) hpo::save_study(study, a.out);

  const auto failed = study.trials.size() - study.complete_count();
  if (failed) log(std::to_string(failed) + " of " + std::to_string(study.trials.size()) + " trials failed");
  if (study.complete_count() == 0) throw Error("every trial failed");

  nlohmann::json summary = nlohmann::json::object();
  auto describe = [&](const hpo::Trial& t) {
    return nlohmann::json{{"index", t.index}, {"params", hpo::params_to_json(t.params)}, {"metrics", t.metrics}};
  };
  summary["best"] = describe(study.best());
  for (const auto& spec : a.best_by) {
    // metric[:min|max]
    const auto colon = spec.find(':');
    const std::string metric = spec.substr(0, colon);
    const auto dir = colon == std::string::npos || spec.substr(colon + 1) == "min" ? hpo::Direction::minimize
                                                                                   : hpo::Direction::maximize;
    summary["best_by"][spec] = describe(study.best_by(metric, dir));
  }
  std::cout << summary.dump(2) << "\n";
  return kOk;
}

}  // namespace

void setup_hpo(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<HpoArgs>();
  auto* hpo = app.add_subcommand("hpo", "Hyperparameter search against an external objective");
  hpo->require_subcommand(1);
  auto* r = hpo->add_subcommand("run", "Run a TPE or random-search study");
  r->add_option("--space", a->space, "Search space JSON (default: the fine-tuning space)")->check(CLI::ExistingFile);
  r->add_option("--trials", a->trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  r->add_option("--sampler", a->sampler, "tpe or random")->check(CLI::IsMember({"tpe", "random"}))->capture_default_str();
  r->add_option("--seed", a->seed, "Random seed")->capture_default_str();
  r->add_option("--cmd", a->cmd, "Objective command: params JSON on stdin, metrics JSON on stdout")->required();
  r->add_option("--metric", a->metric, "Metric to optimize")->capture_default_str();
  r->add_option("--direction", a->direction, "minimize or maximize")
      ->check(CLI::IsMember({"minimize", "maximize"}))
      ->capture_default_str();
  r->add_option("--out", a->out, "Study JSON-lines file");
  r->add_option("--parallel", a->parallel, "Suggestions evaluated concurrently per round")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  r->add_option("--best-by", a->best_by, "Also report the best trial by metric[:min|max]");
  r->callback([a, &ctx] { ctx.action = [a] { return run(*a); }; });
}

}  // namespace asrlab::cli
