#include "diab/config.hpp"

#include <fstream>
#include <set>

#include "diab/errors.hpp"
#include "diab/tuning.hpp"

namespace diab {

RunConfig::RunConfig() {
  grids = nlohmann::json::object();
  for (ModelKind kind : kAllModelKinds) grids[to_string(kind)] = default_grid_json(kind);
}

void RunConfig::validate() const {
  if (out.empty()) throw ArgumentError("output directory must not be empty");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ArgumentError("test_fraction must lie in (0, 1)");
  if (cv_folds < 2) throw ArgumentError("cv_folds must be >= 2");
  if (n_boot < 2) throw ArgumentError("n_boot must be >= 2");
  if (!(recall_target > 0.0) || recall_target > 1.0)
    throw ArgumentError("recall_target must lie in (0, 1]");
  if (synth.n < 20) throw ArgumentError("synth.n must be >= 20");
  if (!(synth.prevalence > 0.0 && synth.prevalence < 1.0))
    throw ArgumentError("synth.prevalence must lie in (0, 1)");
  if (synth.missing_rate < 0.0 || synth.missing_rate >= 15.0 / 16.0)
    throw ArgumentError("synth.missing_rate must lie in [0, 15/16)");
  for (ModelKind kind : kAllModelKinds) {
    if (!grids.contains(to_string(kind)))
      throw ArgumentError("grids is missing model kind: " + to_string(kind));
    grid_from_json(kind, grids.at(to_string(kind)));  // throws on malformed lists
  }
}

nlohmann::json RunConfig::to_json() const {
  return {{"input", input},
          {"delimiter", std::string(1, delimiter)},
          {"out", out},
          {"seed", seed},
          {"test_fraction", test_fraction},
          {"cv_folds", cv_folds},
          {"n_boot", n_boot},
          {"recall_target", recall_target},
          {"jobs", jobs},
          {"synth",
           {{"n", synth.n},
            {"prevalence", synth.prevalence},
            {"missing_rate", synth.missing_rate}}},
          {"schema", schema.to_json()},
          {"grids", grids}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "input",  "delimiter",     "out",  "seed",  "test_fraction", "cv_folds",
      "n_boot", "recall_target", "jobs", "synth", "schema",        "grids"};
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ArgumentError("unknown config key: " + it.key());

  RunConfig cfg;
  if (j.contains("input")) cfg.input = j.at("input").get<std::string>();
  if (j.contains("delimiter")) {
    const auto d = j.at("delimiter").get<std::string>();
    if (d == "\\t") {
      cfg.delimiter = '\t';
    } else if (d.size() == 1) {
      cfg.delimiter = d[0];
    } else {
      throw ArgumentError("delimiter must be one character (or \\t)");
    }
  }
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("test_fraction")) cfg.test_fraction = j.at("test_fraction").get<double>();
  if (j.contains("cv_folds")) cfg.cv_folds = j.at("cv_folds").get<int>();
  if (j.contains("n_boot")) cfg.n_boot = j.at("n_boot").get<size_t>();
  if (j.contains("recall_target")) cfg.recall_target = j.at("recall_target").get<double>();
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    static const std::set<std::string> synth_known = {"n", "prevalence", "missing_rate"};
    for (auto it = s.begin(); it != s.end(); ++it)
      if (!synth_known.count(it.key()))
        throw ArgumentError("unknown config key: synth." + it.key());
    if (s.contains("n")) cfg.synth.n = s.at("n").get<size_t>();
    if (s.contains("prevalence")) cfg.synth.prevalence = s.at("prevalence").get<double>();
    if (s.contains("missing_rate")) cfg.synth.missing_rate = s.at("missing_rate").get<double>();
  }
  if (j.contains("schema")) cfg.schema = FeatureSchema::from_json(j.at("schema"));
  if (j.contains("grids")) {
    if (!j.at("grids").is_object()) throw ArgumentError("grids must be a JSON object");
    for (auto it = j.at("grids").begin(); it != j.at("grids").end(); ++it) {
      model_kind_from_string(it.key());  // rejects unknown kinds
      cfg.grids[it.key()] = it.value();
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("malformed config file " + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace diab
