#pragma once

#include <vector>

#include "json.hpp"

#include "diab/cohort.hpp"
#include "diab/schema.hpp"

namespace diab {

// Train-fitted fill values: arithmetic mean for numeric features, modal
// category for categorical ones (ties break toward the lowest encoded
// category value).
struct ImputationPlan {
  struct FeatureFill {
    double fill = 0.0;
    size_t fitted_on = 0;  // training samples the fill was derived from
  };
  std::vector<FeatureFill> fills;

  nlohmann::json to_json(const FeatureSchema& schema) const;
  static ImputationPlan from_json(const nlohmann::json& j, const FeatureSchema& schema);
};

ImputationPlan fit_imputer(const Cohort& train, const FeatureSchema& schema);

// Fills every masked-off cell from the plan; present values are never
// touched. The result has an all-true mask.
Cohort apply_imputer(const ImputationPlan& plan, const Cohort& cohort);

}  // namespace diab
