#include <iostream>

#include <omp.h>

#include "common.hpp"

using namespace asrlab;

int main(int argc, char** argv) {
  CLI::App app{"asrlab: decoding, scoring, language models, augmentation and hyperparameter analysis for "
               "low-resource speech recognition"};
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "JSON file with option values (flags take precedence)");
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: all cores)")->envname("ASRLAB_JOBS")->check(CLI::NonNegativeNumber);
  app.require_subcommand(1);

  cli::Context ctx;
  cli::setup_decode(app, ctx);
  cli::setup_score(app, ctx);
  cli::setup_lm(app, ctx);
  cli::setup_augment(app, ctx);
  cli::setup_hpo(app, ctx);
  cli::setup_sensitivity(app, ctx);
  cli::setup_report(app, ctx);
  cli::setup_tune(app, ctx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  if (jobs > 0) omp_set_num_threads(jobs);
  std::cerr << app.config_to_str(true, false) << "\n";

  try {
    return ctx.action ? ctx.action() : cli::kUsage;
  } catch (const cli::UsageError& e) {
    cli::log(e.what());
    return cli::kUsage;
  } catch (const std::exception& e) {
    cli::log(e.what());
    return cli::kFailure;
  }
}
