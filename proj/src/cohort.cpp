#include "diab/cohort.hpp"

#include <fstream>

#include "diab/errors.hpp"

namespace diab {

std::string to_string(LabelSource s) {
  return s == LabelSource::self_report ? "self_report" : "glucose";
}

LabelSource label_source_from_string(const std::string& s) {
  if (s == "self_report") return LabelSource::self_report;
  if (s == "glucose") return LabelSource::glucose;
  throw ArgumentError("unknown label source: " + s);
}

bool Cohort::fully_observed() const {
  for (uint8_t m : mask)
    if (!m) return false;
  return true;
}

size_t Cohort::positives() const {
  size_t c = 0;
  for (int y : labels) c += (y == 1);
  return c;
}

Cohort Cohort::subset(std::span<const size_t> rows) const {
  Cohort out;
  out.n_features = n_features;
  out.ids.reserve(rows.size());
  out.features.reserve(rows.size() * n_features);
  out.mask.reserve(rows.size() * n_features);
  for (size_t r : rows) {
    if (r >= n()) throw ArgumentError("subset row out of range");
    out.ids.push_back(ids[r]);
    out.labels.push_back(labels[r]);
    out.label_source.push_back(label_source[r]);
    const size_t base = r * n_features;
    out.features.insert(out.features.end(), features.begin() + base,
                        features.begin() + base + n_features);
    out.mask.insert(out.mask.end(), mask.begin() + base, mask.begin() + base + n_features);
  }
  return out;
}

nlohmann::json Cohort::to_json(const FeatureSchema& schema) const {
  if (schema.size() != n_features)
    throw ArgumentError("schema width does not match cohort feature count");
  nlohmann::json j;
  j["format_version"] = 1;
  j["schema_codes"] = schema.codes();
  j["ids"] = ids;
  j["labels"] = labels;
  nlohmann::json sources = nlohmann::json::array();
  for (auto s : label_source) sources.push_back(to_string(s));
  j["label_source"] = std::move(sources);
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t f = 0; f < n_features; ++f) {
      if (present(i, f)) row.push_back(value(i, f));
      else row.push_back(nullptr);
    }
    rows.push_back(std::move(row));
  }
  j["features"] = std::move(rows);
  return j;
}

Cohort Cohort::from_json(const nlohmann::json& j, const FeatureSchema& schema) {
  Cohort c;
  const auto codes = j.at("schema_codes").get<std::vector<std::string>>();
  if (codes != schema.codes())
    throw ArtifactError("cohort artifact schema codes do not match the active schema");
  c.n_features = schema.size();
  c.ids = j.at("ids").get<std::vector<std::string>>();
  c.labels = j.at("labels").get<std::vector<int>>();
  for (const auto& s : j.at("label_source"))
    c.label_source.push_back(label_source_from_string(s.get<std::string>()));
  const auto& rows = j.at("features");
  if (rows.size() != c.ids.size() || c.labels.size() != c.ids.size() ||
      c.label_source.size() != c.ids.size())
    throw ArtifactError("cohort artifact fields have inconsistent lengths");
  c.features.reserve(rows.size() * c.n_features);
  c.mask.reserve(rows.size() * c.n_features);
  for (const auto& row : rows) {
    if (row.size() != c.n_features)
      throw ArtifactError("cohort artifact row width does not match schema");
    for (const auto& cell : row) {
      if (cell.is_null()) {
        c.features.push_back(0.0);
        c.mask.push_back(0);
      } else {
        c.features.push_back(cell.get<double>());
        c.mask.push_back(1);
      }
    }
  }
  return c;
}

void Cohort::save(const std::string& path, const FeatureSchema& schema) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write cohort file: " + path);
  out << to_json(schema).dump(1) << '\n';
  if (!out) throw IoError("write failure on: " + path);
}

Cohort Cohort::load(const std::string& path, const FeatureSchema& schema,
                    const std::string& hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing cohort artifact: " + path + " (" + hint + ")");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("malformed cohort artifact " + path + ": " + e.what());
  }
  return from_json(j, schema);
}

}  // namespace diab
