#include "diab/impute.hpp"

#include <map>

#include "diab/errors.hpp"

namespace diab {

ImputationPlan fit_imputer(const Cohort& train, const FeatureSchema& schema) {
  if (train.n_features != schema.size())
    throw ArgumentError("schema width does not match cohort feature count");
  ImputationPlan plan;
  plan.fills.resize(schema.size());

  for (size_t f = 0; f < schema.size(); ++f) {
    const bool numeric = schema.at(f).kind == FeatureKind::numeric;
    size_t count = 0;
    double sum = 0.0;
    std::map<double, size_t> category_counts;
    for (size_t i = 0; i < train.n(); ++i) {
      if (!train.present(i, f)) continue;
      ++count;
      if (numeric) sum += train.value(i, f);
      else ++category_counts[train.value(i, f)];
    }
    if (count == 0)
      throw ImputationError("feature " + schema.at(f).survey_code +
                            " has no observed training values to impute from");
    auto& fill = plan.fills[f];
    fill.fitted_on = count;
    if (numeric) {
      fill.fill = sum / static_cast<double>(count);
    } else {
      // std::map iterates categories in ascending order, so keeping only
      // strictly larger counts lands ties on the lowest category value.
      size_t best_count = 0;
      double best_value = 0.0;
      for (const auto& [value, c] : category_counts) {
        if (c > best_count) {
          best_count = c;
          best_value = value;
        }
      }
      fill.fill = best_value;
    }
  }
  return plan;
}

Cohort apply_imputer(const ImputationPlan& plan, const Cohort& cohort) {
  if (plan.fills.size() != cohort.n_features)
    throw ArgumentError("imputation plan does not cover every cohort feature");
  Cohort out = cohort;
  for (size_t i = 0; i < out.n(); ++i) {
    for (size_t f = 0; f < out.n_features; ++f) {
      if (!out.present(i, f)) out.set(i, f, plan.fills[f].fill, true);
    }
  }
  return out;
}

nlohmann::json ImputationPlan::to_json(const FeatureSchema& schema) const {
  if (fills.size() != schema.size())
    throw ArgumentError("imputation plan width does not match schema");
  nlohmann::json arr = nlohmann::json::array();
  for (size_t f = 0; f < fills.size(); ++f) {
    arr.push_back({{"survey_code", schema.at(f).survey_code},
                   {"fill", fills[f].fill},
                   {"fitted_on", fills[f].fitted_on}});
  }
  return arr;
}

ImputationPlan ImputationPlan::from_json(const nlohmann::json& j, const FeatureSchema& schema) {
  ImputationPlan plan;
  if (j.size() != schema.size())
    throw ArtifactError("imputation plan entry count does not match schema");
  plan.fills.resize(schema.size());
  for (size_t f = 0; f < schema.size(); ++f) {
    const auto& e = j.at(f);
    if (e.at("survey_code").get<std::string>() != schema.at(f).survey_code)
      throw ArtifactError("imputation plan feature order does not match schema");
    plan.fills[f].fill = e.at("fill").get<double>();
    plan.fills[f].fitted_on = e.at("fitted_on").get<size_t>();
  }
  return plan;
}

}  // namespace diab
