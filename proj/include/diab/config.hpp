#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "diab/schema.hpp"

namespace diab {

// Resolved run configuration. Every subcommand echoes the full resolved
// form into <out>/config-echo/, and rerunning from that echo reproduces
// the outputs byte for byte.
struct RunConfig {
  std::string input;
  char delimiter = ',';
  std::string out = "out";
  uint64_t seed = 17;
  double test_fraction = 0.2;
  int cv_folds = 10;
  size_t n_boot = 1000;
  double recall_target = 0.75;
  int jobs = 0;  // 0 = all hardware threads

  struct Synth {
    size_t n = 1000;
    double prevalence = 0.19;
    double missing_rate = 0.25;
  } synth;

  FeatureSchema schema = FeatureSchema::default_schema();
  nlohmann::json grids;  // per-kind per-parameter value lists

  RunConfig();

  void validate() const;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
};

}  // namespace diab
