#include "diab/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "diab/boosting.hpp"
#include "diab/errors.hpp"
#include "diab/forest.hpp"
#include "diab/knn.hpp"
#include "diab/logistic.hpp"
#include "diab/svm.hpp"

namespace diab {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return "logistic_regression";
    case ModelKind::knn: return "knn";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::gradient_boosting: return "gradient_boosting";
    case ModelKind::svm_linear: return "svm_linear";
  }
  throw ArgumentError("invalid model kind value");
}

ModelKind model_kind_from_string(const std::string& s) {
  for (ModelKind k : kAllModelKinds)
    if (to_string(k) == s) return k;
  throw ArgumentError("unknown model kind: " + s);
}

std::string to_string(KnnWeighting w) {
  return w == KnnWeighting::uniform ? "uniform" : "inverse_distance";
}

std::string to_string(FeatureSubset f) {
  switch (f) {
    case FeatureSubset::sqrt_features: return "sqrt";
    case FeatureSubset::half_features: return "half";
    case FeatureSubset::all_features: return "all";
  }
  throw ArgumentError("invalid feature subset value");
}

KnnWeighting knn_weighting_from_string(const std::string& s) {
  if (s == "uniform") return KnnWeighting::uniform;
  if (s == "inverse_distance") return KnnWeighting::inverse_distance;
  throw ArgumentError("unknown knn weighting: " + s);
}

FeatureSubset feature_subset_from_string(const std::string& s) {
  if (s == "sqrt") return FeatureSubset::sqrt_features;
  if (s == "half") return FeatureSubset::half_features;
  if (s == "all") return FeatureSubset::all_features;
  throw ArgumentError("unknown feature subset: " + s);
}

size_t feature_subset_count(FeatureSubset subset, size_t n_columns) {
  if (n_columns == 0) throw ArgumentError("feature subset of zero columns");
  size_t m = n_columns;
  switch (subset) {
    case FeatureSubset::sqrt_features:
      m = static_cast<size_t>(std::lround(std::sqrt(static_cast<double>(n_columns))));
      break;
    case FeatureSubset::half_features: m = n_columns / 2; break;
    case FeatureSubset::all_features: m = n_columns; break;
  }
  return std::clamp<size_t>(m, 1, n_columns);
}

ModelKind kind_of(const HyperParams& params) {
  struct Visitor {
    ModelKind operator()(const LogisticParams&) const { return ModelKind::logistic_regression; }
    ModelKind operator()(const KnnParams&) const { return ModelKind::knn; }
    ModelKind operator()(const ForestParams&) const { return ModelKind::random_forest; }
    ModelKind operator()(const BoostParams&) const { return ModelKind::gradient_boosting; }
    ModelKind operator()(const SvmParams&) const { return ModelKind::svm_linear; }
  };
  return std::visit(Visitor{}, params);
}

HyperParams default_params(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return LogisticParams{};
    case ModelKind::knn: return KnnParams{};
    case ModelKind::random_forest: return ForestParams{};
    case ModelKind::gradient_boosting: return BoostParams{};
    case ModelKind::svm_linear: return SvmParams{};
  }
  throw ArgumentError("invalid model kind value");
}

void validate_params(const HyperParams& params) {
  struct Visitor {
    void operator()(const LogisticParams& p) const {
      if (!(p.l2_strength >= 0.0) || !std::isfinite(p.l2_strength))
        throw ArgumentError("logistic l2_strength must be finite and >= 0");
    }
    void operator()(const KnnParams& p) const {
      if (p.k < 1) throw ArgumentError("knn k must be >= 1");
    }
    void operator()(const ForestParams& p) const {
      if (p.n_trees < 1) throw ArgumentError("forest n_trees must be >= 1");
      if (p.max_depth < 0) throw ArgumentError("forest max_depth must be >= 0");
    }
    void operator()(const BoostParams& p) const {
      if (p.n_stages < 1) throw ArgumentError("boosting n_stages must be >= 1");
      if (!(p.learning_rate > 0.0) || !std::isfinite(p.learning_rate))
        throw ArgumentError("boosting learning_rate must be finite and > 0");
      if (p.max_depth < 1) throw ArgumentError("boosting max_depth must be >= 1");
    }
    void operator()(const SvmParams& p) const {
      if (!(p.cost_c > 0.0) || !std::isfinite(p.cost_c))
        throw ArgumentError("svm cost_c must be finite and > 0");
    }
  };
  std::visit(Visitor{}, params);
}

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string describe_params(const HyperParams& params) {
  struct Visitor {
    std::string operator()(const LogisticParams& p) const {
      return "logistic_regression(l2=" + fmt_num(p.l2_strength) + ")";
    }
    std::string operator()(const KnnParams& p) const {
      return "knn(k=" + std::to_string(p.k) + ", weighting=" + to_string(p.weighting) + ")";
    }
    std::string operator()(const ForestParams& p) const {
      return "random_forest(trees=" + std::to_string(p.n_trees) +
             ", depth=" + std::to_string(p.max_depth) +
             ", subset=" + to_string(p.features_per_split) + ")";
    }
    std::string operator()(const BoostParams& p) const {
      return "gradient_boosting(stages=" + std::to_string(p.n_stages) +
             ", rate=" + fmt_num(p.learning_rate) + ", depth=" + std::to_string(p.max_depth) +
             ")";
    }
    std::string operator()(const SvmParams& p) const {
      return "svm_linear(c=" + fmt_num(p.cost_c) + ")";
    }
  };
  return std::visit(Visitor{}, params);
}

nlohmann::json hyperparams_to_json(const HyperParams& params) {
  struct Visitor {
    nlohmann::json operator()(const LogisticParams& p) const {
      return {{"l2_strength", p.l2_strength}};
    }
    nlohmann::json operator()(const KnnParams& p) const {
      return {{"k", p.k}, {"weighting", to_string(p.weighting)}};
    }
    nlohmann::json operator()(const ForestParams& p) const {
      return {{"n_trees", p.n_trees},
              {"max_depth", p.max_depth},
              {"features_per_split", to_string(p.features_per_split)}};
    }
    nlohmann::json operator()(const BoostParams& p) const {
      return {{"n_stages", p.n_stages},
              {"learning_rate", p.learning_rate},
              {"max_depth", p.max_depth}};
    }
    nlohmann::json operator()(const SvmParams& p) const { return {{"cost_c", p.cost_c}}; }
  };
  return std::visit(Visitor{}, params);
}

HyperParams hyperparams_from_json(ModelKind kind, const nlohmann::json& j) {
  switch (kind) {
    case ModelKind::logistic_regression: {
      LogisticParams p;
      p.l2_strength = j.at("l2_strength").get<double>();
      return p;
    }
    case ModelKind::knn: {
      KnnParams p;
      p.k = j.at("k").get<int>();
      p.weighting = knn_weighting_from_string(j.at("weighting").get<std::string>());
      return p;
    }
    case ModelKind::random_forest: {
      ForestParams p;
      p.n_trees = j.at("n_trees").get<int>();
      p.max_depth = j.at("max_depth").get<int>();
      p.features_per_split =
          feature_subset_from_string(j.at("features_per_split").get<std::string>());
      return p;
    }
    case ModelKind::gradient_boosting: {
      BoostParams p;
      p.n_stages = j.at("n_stages").get<int>();
      p.learning_rate = j.at("learning_rate").get<double>();
      p.max_depth = j.at("max_depth").get<int>();
      return p;
    }
    case ModelKind::svm_linear: {
      SvmParams p;
      p.cost_c = j.at("cost_c").get<double>();
      return p;
    }
  }
  throw ArgumentError("invalid model kind value");
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Classifier::predict_proba(std::span<const double> x) const {
  if (x.size() != width_)
    throw ShapeError("feature vector has " + std::to_string(x.size()) + " columns, expected " +
                     std::to_string(width_));
  return proba_impl(x);
}

TrainedModel::TrainedModel(HyperParams params, uint64_t seed, ColumnCatalog catalog,
                           std::unique_ptr<Classifier> impl)
    : params_(std::move(params)), seed_(seed), catalog_(std::move(catalog)),
      impl_(std::move(impl)) {
  if (!impl_) throw ArgumentError("trained model requires a classifier");
  if (kind_of(params_) != impl_->kind())
    throw ArgumentError("hyperparameter kind does not match classifier kind");
  if (catalog_.columns.size() != impl_->input_width())
    throw ShapeError("column catalog width does not match classifier input width");
}

std::vector<double> TrainedModel::predict_proba_rows(const DesignMatrix& X) const {
  std::vector<double> p(X.rows);
  for (size_t i = 0; i < X.rows; ++i) p[i] = impl_->predict_proba(X.row(i));
  return p;
}

std::vector<double> TrainedModel::feature_importances() const {
  const std::vector<double>* raw = impl_->column_importances();
  if (!raw)
    throw UnsupportedError("feature importances are only available for tree models (" +
                           to_string(kind()) + " has none)");
  std::vector<double> agg(catalog_.n_schema_features, 0.0);
  for (size_t c = 0; c < raw->size(); ++c) {
    const size_t f = catalog_.columns[c].feature_index;
    if (f >= agg.size()) throw ShapeError("column catalog references feature out of range");
    agg[f] += (*raw)[c];
  }
  double total = 0.0;
  for (double v : agg) total += v;
  if (total > 0.0)
    for (double& v : agg) v /= total;
  return agg;
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["kind"] = to_string(kind());
  j["hyperparams"] = hyperparams_to_json(params_);
  j["seed"] = seed_;
  j["column_catalog"] = catalog_.to_json();
  j["fitted"] = impl_->params_json();
  return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
  HyperParams params = hyperparams_from_json(kind, j.at("hyperparams"));
  const uint64_t seed = j.at("seed").get<uint64_t>();
  ColumnCatalog catalog = ColumnCatalog::from_json(j.at("column_catalog"));
  const nlohmann::json& fitted = j.at("fitted");
  std::unique_ptr<Classifier> impl;
  switch (kind) {
    case ModelKind::logistic_regression: impl = logistic_from_json(fitted); break;
    case ModelKind::knn: impl = knn_from_json(fitted); break;
    case ModelKind::random_forest: impl = forest_from_json(fitted); break;
    case ModelKind::gradient_boosting: impl = boosting_from_json(fitted); break;
    case ModelKind::svm_linear: impl = svm_from_json(fitted); break;
  }
  return TrainedModel(std::move(params), seed, std::move(catalog), std::move(impl));
}

void TrainedModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path);
  out << to_json().dump(1) << '\n';
  if (!out) throw IoError("write failure on: " + path);
}

TrainedModel TrainedModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("missing model artifact: " + path + " (run `train` first)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError("malformed model artifact " + path + ": " + e.what());
  }
  return from_json(j);
}

TrainedModel train_model(const HyperParams& params, const DesignMatrix& X,
                         const std::vector<int>& y, uint64_t seed, const ColumnCatalog& catalog,
                         int jobs) {
  validate_params(params);
  if (X.rows == 0) throw TrainingError("cannot train on an empty sample");
  if (X.rows != y.size()) throw ShapeError("label count does not match design matrix rows");
  if (catalog.columns.size() != X.cols)
    throw ShapeError("column catalog width does not match design matrix");
  for (int yb : y)
    if (yb != 0 && yb != 1) throw ArgumentError("labels must be 0 or 1");
  const ModelKind kind = kind_of(params);
  if (kind != ModelKind::knn) {
    size_t pos = 0;
    for (int yb : y) pos += (yb == 1);
    if (pos == 0 || pos == y.size())
      throw TrainingError("training sample for " + to_string(kind) +
                          " contains a single class");
  }
  struct Visitor {
    const DesignMatrix& X;
    const std::vector<int>& y;
    uint64_t seed;
    int jobs;
    std::unique_ptr<Classifier> operator()(const LogisticParams& p) const {
      return train_logistic(p, X, y);
    }
    std::unique_ptr<Classifier> operator()(const KnnParams& p) const { return train_knn(p, X, y); }
    std::unique_ptr<Classifier> operator()(const ForestParams& p) const {
      return train_forest(p, X, y, seed, jobs);
    }
    std::unique_ptr<Classifier> operator()(const BoostParams& p) const {
      return train_boosting(p, X, y);
    }
    std::unique_ptr<Classifier> operator()(const SvmParams& p) const {
      return train_svm(p, X, y, seed);
    }
  };
  std::unique_ptr<Classifier> impl = std::visit(Visitor{X, y, seed, jobs}, params);
  return TrainedModel(params, seed, catalog, std::move(impl));
}

}  // namespace diab
