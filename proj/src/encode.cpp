#include "diab/encode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "diab/errors.hpp"

namespace diab {

namespace {

std::string category_column_name(const std::string& feature, double category) {
  // Category codes are integral in practice; print compactly.
  double rounded = std::round(category);
  if (rounded == category && std::abs(category) < 1e15) {
    return feature + "=" + std::to_string(static_cast<long long>(rounded));
  }
  return feature + "=" + std::to_string(category);
}

}  // namespace

nlohmann::json ColumnCatalog::to_json() const {
  nlohmann::json j;
  j["n_schema_features"] = n_schema_features;
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns) cols.push_back({{"name", c.name}, {"feature", c.feature_index}});
  j["columns"] = std::move(cols);
  return j;
}

ColumnCatalog ColumnCatalog::from_json(const nlohmann::json& j) {
  ColumnCatalog catalog;
  catalog.n_schema_features = j.at("n_schema_features").get<size_t>();
  for (const auto& c : j.at("columns")) {
    catalog.columns.push_back({c.at("name").get<std::string>(), c.at("feature").get<size_t>()});
  }
  return catalog;
}

FeatureEncoder FeatureEncoder::fit(const Cohort& train, const FeatureSchema& schema) {
  if (train.n_features != schema.size())
    throw ArgumentError("schema width does not match cohort feature count");
  if (!train.fully_observed())
    throw ArgumentError("encoder must be fit on a fully imputed cohort");
  if (train.n() == 0) throw ArgumentError("cannot fit encoder on an empty cohort");

  FeatureEncoder enc;
  enc.features_.resize(schema.size());
  const double n = static_cast<double>(train.n());

  for (size_t f = 0; f < schema.size(); ++f) {
    auto& pf = enc.features_[f];
    pf.kind = schema.at(f).kind;
    switch (pf.kind) {
      case FeatureKind::numeric: {
        double sum = 0.0;
        for (size_t i = 0; i < train.n(); ++i) sum += train.value(i, f);
        pf.mean = sum / n;
        double sq = 0.0;
        for (size_t i = 0; i < train.n(); ++i) {
          const double d = train.value(i, f) - pf.mean;
          sq += d * d;
        }
        const double var = sq / n;
        if (var < 1e-24) {
          pf.zero_variance = true;
          pf.stddev = 1.0;
          enc.zero_variance_.push_back(schema.at(f).survey_code);
        } else {
          pf.stddev = std::sqrt(var);
        }
        break;
      }
      case FeatureKind::categorical_nominal: {
        std::set<double> cats;
        for (size_t i = 0; i < train.n(); ++i) cats.insert(train.value(i, f));
        pf.categories.assign(cats.begin(), cats.end());
        break;
      }
      case FeatureKind::categorical_ordinal:
        break;  // rank passthrough, nothing to fit
    }
  }
  enc.build_catalog(schema);
  return enc;
}

void FeatureEncoder::build_catalog(const FeatureSchema& schema) {
  catalog_.columns.clear();
  catalog_.n_schema_features = schema.size();
  for (size_t f = 0; f < schema.size(); ++f) {
    const auto& pf = features_[f];
    if (pf.kind == FeatureKind::categorical_nominal) {
      for (double cat : pf.categories)
        catalog_.columns.push_back({category_column_name(schema.at(f).name, cat), f});
    } else {
      catalog_.columns.push_back({schema.at(f).name, f});
    }
  }
}

DesignMatrix FeatureEncoder::transform(const Cohort& cohort) const {
  if (cohort.n_features != features_.size())
    throw ArgumentError("cohort feature count does not match encoder");
  if (!cohort.fully_observed())
    throw ArgumentError("encoder input must be fully imputed");

  DesignMatrix out = DesignMatrix::zeros(cohort.n(), catalog_.size());
  for (size_t i = 0; i < cohort.n(); ++i) {
    size_t col = 0;
    for (size_t f = 0; f < features_.size(); ++f) {
      const auto& pf = features_[f];
      const double v = cohort.value(i, f);
      switch (pf.kind) {
        case FeatureKind::numeric:
          out.at(i, col++) = pf.zero_variance ? 0.0 : (v - pf.mean) / pf.stddev;
          break;
        case FeatureKind::categorical_ordinal:
          out.at(i, col++) = v;
          break;
        case FeatureKind::categorical_nominal: {
          // Categories unseen at fit time leave the whole group at zero.
          for (double cat : pf.categories) {
            out.at(i, col++) = (v == cat) ? 1.0 : 0.0;
          }
          break;
        }
      }
    }
  }
  return out;
}

nlohmann::json FeatureEncoder::to_json(const FeatureSchema& schema) const {
  nlohmann::json arr = nlohmann::json::array();
  for (size_t f = 0; f < features_.size(); ++f) {
    const auto& pf = features_[f];
    nlohmann::json e;
    e["survey_code"] = schema.at(f).survey_code;
    e["kind"] = to_string(pf.kind);
    switch (pf.kind) {
      case FeatureKind::numeric:
        e["mean"] = pf.mean;
        e["stddev"] = pf.stddev;
        e["zero_variance"] = pf.zero_variance;
        break;
      case FeatureKind::categorical_nominal:
        e["categories"] = pf.categories;
        break;
      case FeatureKind::categorical_ordinal:
        break;
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

FeatureEncoder FeatureEncoder::from_json(const nlohmann::json& j, const FeatureSchema& schema) {
  if (j.size() != schema.size())
    throw ArtifactError("encoder entry count does not match schema");
  FeatureEncoder enc;
  enc.features_.resize(schema.size());
  for (size_t f = 0; f < schema.size(); ++f) {
    const auto& e = j.at(f);
    if (e.at("survey_code").get<std::string>() != schema.at(f).survey_code)
      throw ArtifactError("encoder feature order does not match schema");
    auto& pf = enc.features_[f];
    pf.kind = feature_kind_from_string(e.at("kind").get<std::string>());
    if (pf.kind != schema.at(f).kind)
      throw ArtifactError("encoder feature kind does not match schema");
    switch (pf.kind) {
      case FeatureKind::numeric:
        pf.mean = e.at("mean").get<double>();
        pf.stddev = e.at("stddev").get<double>();
        pf.zero_variance = e.at("zero_variance").get<bool>();
        if (pf.zero_variance) enc.zero_variance_.push_back(schema.at(f).survey_code);
        break;
      case FeatureKind::categorical_nominal:
        pf.categories = e.at("categories").get<std::vector<double>>();
        break;
      case FeatureKind::categorical_ordinal:
        break;
    }
  }
  enc.build_catalog(schema);
  return enc;
}

}  // namespace diab
