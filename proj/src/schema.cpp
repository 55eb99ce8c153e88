#include "diab/schema.hpp"

#include <unordered_set>

#include "diab/errors.hpp"

namespace diab {

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::categorical_nominal: return "categorical_nominal";
    case FeatureKind::categorical_ordinal: return "categorical_ordinal";
  }
  throw ArgumentError("unknown feature kind");
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::numeric;
  if (s == "categorical_nominal") return FeatureKind::categorical_nominal;
  if (s == "categorical_ordinal") return FeatureKind::categorical_ordinal;
  throw ArgumentError("unknown feature kind: " + s);
}

FeatureSchema::FeatureSchema(std::vector<FeatureDef> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw SchemaError("schema must have at least one feature");
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.name.empty() || e.survey_code.empty())
      throw SchemaError("schema entries need a name and a survey code");
    if (!seen.insert(e.survey_code).second)
      throw SchemaError("duplicate survey code in schema: " + e.survey_code);
  }
}

const FeatureSchema& FeatureSchema::default_schema() {
  static const FeatureSchema schema({
      {"AGE", "RIDAGEYR", FeatureKind::numeric, "years"},
      {"WAIST", "BMXWAIST", FeatureKind::numeric, "cm"},
      {"REL", "MCQ250A", FeatureKind::categorical_nominal, ""},
      {"HEIGHT", "BMXHT", FeatureKind::numeric, "cm"},
      {"CHOL", "LBXTC", FeatureKind::numeric, "mg/dL"},
      {"LEG", "BMXLEG", FeatureKind::numeric, "cm"},
      {"WEIGHT", "BMXWT", FeatureKind::numeric, "kg"},
      {"BMI", "BMXBMI", FeatureKind::numeric, "kg/m2"},
      {"RACE", "RIDRETH1", FeatureKind::categorical_nominal, ""},
      {"HBP", "BPQ020", FeatureKind::categorical_nominal, ""},
      {"INCOME", "INDHHINC", FeatureKind::categorical_ordinal, ""},
      {"ALC", "ALQ120Q", FeatureKind::numeric, "days/year"},
      {"SMOKE", "SMD030", FeatureKind::numeric, "years"},
      {"EDU", "DMDEDUC2", FeatureKind::categorical_ordinal, ""},
      {"EXER", "PAQ180", FeatureKind::categorical_ordinal, ""},
      {"GEND", "RIAGENDR", FeatureKind::categorical_nominal, ""},
  });
  return schema;
}

std::optional<size_t> FeatureSchema::index_of_code(const std::string& survey_code) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].survey_code == survey_code) return i;
  return std::nullopt;
}

std::vector<std::string> FeatureSchema::codes() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.survey_code);
  return out;
}

nlohmann::json FeatureSchema::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_) {
    arr.push_back({{"name", e.name},
                   {"survey_code", e.survey_code},
                   {"kind", to_string(e.kind)},
                   {"unit", e.unit}});
  }
  return arr;
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
  std::vector<FeatureDef> entries;
  for (const auto& e : j) {
    FeatureDef def;
    def.name = e.at("name").get<std::string>();
    def.survey_code = e.at("survey_code").get<std::string>();
    def.kind = feature_kind_from_string(e.at("kind").get<std::string>());
    if (e.contains("unit")) def.unit = e.at("unit").get<std::string>();
    entries.push_back(std::move(def));
  }
  return FeatureSchema(std::move(entries));
}

}  // namespace diab
