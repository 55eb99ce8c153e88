#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "diab/cli.hpp"

namespace {

struct RawOverrides {
  std::string config_path;
  uint64_t seed = 0;
  std::string out;
  size_t n_boot = 0;
  double recall_target = 0.0;
  int jobs = 0;
};

void add_common_flags(CLI::App* cmd, RawOverrides& raw) {
  cmd->add_option("--config", raw.config_path, "Run configuration file (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", raw.seed, "Master seed override");
  cmd->add_option("--out", raw.out, "Output directory override");
  cmd->add_option("--n-boot", raw.n_boot, "Bootstrap replicate count override");
  cmd->add_option("--recall-target", raw.recall_target, "Diabetic recall target override");
  cmd->add_option("--jobs", raw.jobs, "Worker thread count (0 = all hardware threads)");
}

void collect_overrides(const CLI::App* cmd, const RawOverrides& raw,
                       diab::CliOverrides& overrides) {
  if (cmd->count("--config") > 0) overrides.config_path = raw.config_path;
  if (cmd->count("--seed") > 0) overrides.seed = raw.seed;
  if (cmd->count("--out") > 0) overrides.out = raw.out;
  if (cmd->count("--n-boot") > 0) overrides.n_boot = raw.n_boot;
  if (cmd->count("--recall-target") > 0) overrides.recall_target = raw.recall_target;
  if (cmd->count("--jobs") > 0) overrides.jobs = raw.jobs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diabetes-screening pipeline: ingest, tune, ensemble, evaluate"};
  app.require_subcommand(1);

  RawOverrides raw;
  diab::CliOverrides overrides;
  void (*commands[])(const diab::RunConfig&) = {
      diab::cmd_ingest, diab::cmd_synth, diab::cmd_train, diab::cmd_evaluate,
      diab::cmd_bootstrap};
  const char* names[] = {"ingest", "synth", "train", "evaluate", "bootstrap"};
  const char* descriptions[] = {
      "Read a delimited extract, apply exclusions and labeling, write the cohort artifact",
      "Generate a synthetic NHANES-style extract at the configured input path",
      "Split, impute, encode, grid-search all five models, assemble the ensemble",
      "Emit metrics, ROC and recall-vs-T data and plots from the trained artifacts",
      "Bootstrap the best model's ROC band on resampled training data"};

  int selected = -1;
  for (int c = 0; c < 5; ++c) {
    CLI::App* cmd = app.add_subcommand(names[c], descriptions[c]);
    add_common_flags(cmd, raw);
    cmd->callback([&selected, &raw, &overrides, cmd, c]() {
      selected = c;
      collect_overrides(cmd, raw, overrides);
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const diab::RunConfig cfg = diab::resolve_config(overrides);
    commands[selected](cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
