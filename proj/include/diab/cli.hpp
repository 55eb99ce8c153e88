#pragma once

#include <optional>
#include <string>

#include "diab/config.hpp"

namespace diab {

struct CliOverrides {
  std::optional<std::string> config_path;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<size_t> n_boot;
  std::optional<double> recall_target;
  std::optional<int> jobs;
};

// Loads the config file (or defaults) and applies the flag overrides.
RunConfig resolve_config(const CliOverrides& overrides);

void cmd_ingest(const RunConfig& cfg);
void cmd_synth(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_bootstrap(const RunConfig& cfg);

}  // namespace diab
