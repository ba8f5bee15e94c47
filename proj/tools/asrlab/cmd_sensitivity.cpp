#include <cmath>
#include <iostream>

#include "asrlab/kernels.hpp"
#include "asrlab/report.hpp"
#include "asrlab/sensitivity.hpp"
#include "common.hpp"

namespace asrlab::cli {

namespace {

struct SensitivityArgs {
  std::string space;
  std::string study;
  std::size_t base_samples = 1024;
  std::uint64_t seed = 0;
  std::string cmd;
  std::string metric = "objective";
  std::size_t bootstrap = 1000;
  std::string out;
  std::string markdown;
};

void emit(const SensitivityArgs& a, const SobolResult& r) {
  const std::string json = to_json(r).dump(2) + "\n";
  if (!a.out.empty()) write_file(a.out, json);
  if (!a.markdown.empty()) write_file(a.markdown, render_markdown(r));
  std::cout << render_markdown(r);
}

int run_direct(const SensitivityArgs& a) {
  const auto space = a.space.empty() ? hpo::SearchSpace::finetune_default() : hpo::load_space(a.space);
  const auto plan = saltelli_sample(space, a.base_samples, a.seed);
  std::vector<hpo::ParamMap> configs;
  configs.reserve(plan.rows());
  for (std::size_t r = 0; r < plan.rows(); ++r) configs.push_back(plan.params(r));
  const auto results = kernels::evaluate_objective(hpo::command_objective(a.cmd), configs);
  std::vector<double> f(plan.rows());
  for (std::size_t r = 0; r < plan.rows(); ++r) {
    if (!results[r] || !results[r]->contains(a.metric) || !std::isfinite(results[r]->at(a.metric))) {
      throw Error("evaluation " + std::to_string(r) + " failed or lacks metric '" + a.metric +
                  "'; the Saltelli design needs every point");
    }
    f[r] = results[r]->at(a.metric);
  }
  EstimateOptions eo;
  eo.bootstrap = a.bootstrap;
  eo.seed = a.seed;
  emit(a, estimate_indices(plan, f, eo));
  return kOk;
}

int run_analyze(const SensitivityArgs& a) {
  const auto study = hpo::load_study(a.study);
  EstimateOptions eo;
  eo.bootstrap = a.bootstrap;
  eo.seed = a.seed;
  const auto r = analyze_study(study, a.base_samples, a.seed, {}, eo);
  log("surrogate leave-one-out RMSE " + std::to_string(*r.loo_rmse) + " over " + std::to_string(*r.trials_used) +
      " trials");
  emit(a, r);
  return kOk;
}

void common(CLI::App* sub, SensitivityArgs& a) {
  sub->add_option("--base-samples", a.base_samples, "Base sample count n (power of two)")->capture_default_str();
  sub->add_option("--seed", a.seed, "Seed for scrambling and bootstrap")->capture_default_str();
  sub->add_option("--bootstrap", a.bootstrap, "Bootstrap replicates for intervals")->capture_default_str();
  sub->add_option("--out", a.out, "Result JSON");
  sub->add_option("--markdown", a.markdown, "Also write the Markdown table to a file");
}

}  // namespace

void setup_sensitivity(CLI::App& app, Context& ctx) {
  auto a = std::make_shared<SensitivityArgs>();
  auto* s = app.add_subcommand("sensitivity", "Sobol' sensitivity analysis of hyperparameters");
  s->require_subcommand(1);

  auto* run = s->add_subcommand("run", "Evaluate an external objective on a Saltelli design");
  common(run, *a);
  run->add_option("--space", a->space, "Search space JSON (default: the fine-tuning space)")->check(CLI::ExistingFile);
  run->add_option("--cmd", a->cmd, "Objective command: params JSON on stdin, metrics JSON on stdout")->required();
  run->add_option("--metric", a->metric, "Metric to analyze")->capture_default_str();
  run->callback([a, &ctx] { ctx.action = [a] { return run_direct(*a); }; });

  auto* an = s->add_subcommand("analyze", "Analyze a recorded study through an RBF surrogate");
  common(an, *a);
  an->add_option("--study", a->study, "Study JSON-lines file")->required()->check(CLI::ExistingFile);
  an->callback([a, &ctx] { ctx.action = [a] { return run_analyze(*a); }; });
}

}  // namespace asrlab::cli
