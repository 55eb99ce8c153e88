#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "diab/cohort.hpp"
#include "diab/schema.hpp"

namespace diab {

// Maps every design column back to exactly one schema feature.
struct ColumnCatalog {
  struct Column {
    std::string name;
    size_t feature_index = 0;
  };
  std::vector<Column> columns;
  size_t n_schema_features = 0;

  size_t size() const { return columns.size(); }

  nlohmann::json to_json() const;
  static ColumnCatalog from_json(const nlohmann::json& j);
};

// Dense row-major numeric grid fed to the classifiers.
struct DesignMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  std::span<const double> row(size_t i) const { return {data.data() + i * cols, cols}; }
  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }

  static DesignMatrix zeros(size_t rows, size_t cols) {
    return DesignMatrix{rows, cols, std::vector<double>(rows * cols, 0.0)};
  }
};

// Train-fitted feature encoding: one-hot for nominal categories observed in
// the fit cohort, integer ranks passed through for ordinals, z-scores for
// numerics. Zero-variance numerics encode to all-zero columns and are
// flagged rather than erroring.
class FeatureEncoder {
 public:
  static FeatureEncoder fit(const Cohort& train, const FeatureSchema& schema);

  DesignMatrix transform(const Cohort& cohort) const;

  const ColumnCatalog& catalog() const { return catalog_; }

  // Survey codes of numeric features that had zero variance at fit time.
  const std::vector<std::string>& zero_variance_features() const { return zero_variance_; }

  nlohmann::json to_json(const FeatureSchema& schema) const;
  static FeatureEncoder from_json(const nlohmann::json& j, const FeatureSchema& schema);

 private:
  struct PerFeature {
    FeatureKind kind = FeatureKind::numeric;
    double mean = 0.0;                // numeric only
    double stddev = 1.0;              // numeric only, population estimate
    bool zero_variance = false;       // numeric only
    std::vector<double> categories;   // nominal only, ascending
  };

  std::vector<PerFeature> features_;
  ColumnCatalog catalog_;
  std::vector<std::string> zero_variance_;

  void build_catalog(const FeatureSchema& schema);
};

}  // namespace diab
