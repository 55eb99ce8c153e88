#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "diab/schema.hpp"

namespace diab {

enum class LabelSource { self_report, glucose };

std::string to_string(LabelSource s);
LabelSource label_source_from_string(const std::string& s);

// Labeled sample matrix with an explicit missingness mask. Every row has a
// label; unlabeled records never make it into a Cohort.
struct Cohort {
  size_t n_features = 0;
  std::vector<std::string> ids;      // one per sample
  std::vector<double> features;      // n * n_features, row-major
  std::vector<uint8_t> mask;         // same shape, 1 = present
  std::vector<int> labels;           // 0 = non-diabetic, 1 = diabetic
  std::vector<LabelSource> label_source;

  size_t n() const { return ids.size(); }

  double value(size_t row, size_t col) const { return features[row * n_features + col]; }
  bool present(size_t row, size_t col) const { return mask[row * n_features + col] != 0; }
  std::span<const double> row(size_t i) const {
    return {features.data() + i * n_features, n_features};
  }

  void set(size_t row, size_t col, double v, bool is_present) {
    features[row * n_features + col] = v;
    mask[row * n_features + col] = is_present ? 1 : 0;
  }

  bool fully_observed() const;
  size_t positives() const;

  // New cohort holding the given rows, in the given order.
  Cohort subset(std::span<const size_t> rows) const;

  nlohmann::json to_json(const FeatureSchema& schema) const;
  static Cohort from_json(const nlohmann::json& j, const FeatureSchema& schema);

  void save(const std::string& path, const FeatureSchema& schema) const;
  static Cohort load(const std::string& path, const FeatureSchema& schema,
                     const std::string& hint = "run `ingest` first");
};

}  // namespace diab
