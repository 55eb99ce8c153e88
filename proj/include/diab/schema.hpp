#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace diab {

enum class FeatureKind { numeric, categorical_nominal, categorical_ordinal };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

struct FeatureDef {
  std::string name;         // short identifier, e.g. "BMI"
  std::string survey_code;  // column header in the extract, e.g. "BMXBMI"
  FeatureKind kind = FeatureKind::numeric;
  std::string unit;         // optional, informational only
};

// Ordered feature codebook. Survey codes must be unique.
class FeatureSchema {
 public:
  explicit FeatureSchema(std::vector<FeatureDef> entries);

  // The 16-feature survey codebook this pipeline is built around.
  static const FeatureSchema& default_schema();

  size_t size() const { return entries_.size(); }
  const FeatureDef& at(size_t i) const { return entries_.at(i); }
  const std::vector<FeatureDef>& entries() const { return entries_; }

  std::optional<size_t> index_of_code(const std::string& survey_code) const;
  std::vector<std::string> codes() const;

  nlohmann::json to_json() const;
  static FeatureSchema from_json(const nlohmann::json& j);

 private:
  std::vector<FeatureDef> entries_;
};

}  // namespace diab
