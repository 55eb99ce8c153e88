#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "diab/encode.hpp"

namespace diab {

enum class ModelKind {
  logistic_regression,
  knn,
  random_forest,
  gradient_boosting,
  svm_linear,
};

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {
    ModelKind::logistic_regression, ModelKind::knn,        ModelKind::random_forest,
    ModelKind::gradient_boosting,   ModelKind::svm_linear,
};

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

enum class KnnWeighting { uniform, inverse_distance };

// Candidate feature count examined at each tree split.
enum class FeatureSubset { sqrt_features, half_features, all_features };

std::string to_string(KnnWeighting w);
std::string to_string(FeatureSubset f);
KnnWeighting knn_weighting_from_string(const std::string& s);
FeatureSubset feature_subset_from_string(const std::string& s);

size_t feature_subset_count(FeatureSubset subset, size_t n_columns);

struct LogisticParams {
  double l2_strength = 1.0;
};
struct KnnParams {
  int k = 15;
  KnnWeighting weighting = KnnWeighting::uniform;
};
struct ForestParams {
  int n_trees = 200;
  int max_depth = 12;  // 0 = unlimited
  FeatureSubset features_per_split = FeatureSubset::sqrt_features;
};
struct BoostParams {
  int n_stages = 200;
  double learning_rate = 0.1;
  int max_depth = 3;
};
struct SvmParams {
  double cost_c = 1.0;
};

using HyperParams = std::variant<LogisticParams, KnnParams, ForestParams, BoostParams, SvmParams>;

ModelKind kind_of(const HyperParams& params);
HyperParams default_params(ModelKind kind);
void validate_params(const HyperParams& params);
std::string describe_params(const HyperParams& params);

nlohmann::json hyperparams_to_json(const HyperParams& params);
HyperParams hyperparams_from_json(ModelKind kind, const nlohmann::json& j);

// One probability-output contract shared by the five classifiers.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelKind kind() const = 0;

  double predict_proba(std::span<const double> x) const;

  size_t input_width() const { return width_; }

  // Raw impurity-decrease totals per design column; only tree models
  // provide them.
  virtual const std::vector<double>* column_importances() const { return nullptr; }

  virtual nlohmann::json params_json() const = 0;

 protected:
  virtual double proba_impl(std::span<const double> x) const = 0;

  size_t width_ = 0;
};

// A fitted classifier plus the metadata needed to reuse it: hyperparams,
// seed, and the design-column catalog it was trained against.
class TrainedModel {
 public:
  TrainedModel(HyperParams params, uint64_t seed, ColumnCatalog catalog,
               std::unique_ptr<Classifier> impl);

  ModelKind kind() const { return impl_->kind(); }
  const HyperParams& params() const { return params_; }
  uint64_t seed() const { return seed_; }
  const ColumnCatalog& catalog() const { return catalog_; }
  const Classifier& impl() const { return *impl_; }

  double predict_proba(std::span<const double> x) const { return impl_->predict_proba(x); }

  std::vector<double> predict_proba_rows(const DesignMatrix& X) const;

  // Mean impurity decrease aggregated to schema features, normalized to
  // sum to one. Throws UnsupportedError for kinds without trees.
  std::vector<double> feature_importances() const;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

  void save(const std::string& path) const;
  static TrainedModel load(const std::string& path);

 private:
  HyperParams params_;
  uint64_t seed_ = 0;
  ColumnCatalog catalog_;
  std::unique_ptr<Classifier> impl_;
};

// Trains one model of the given kind. `params` must hold that kind's
// parameter set. Non-knn kinds reject single-class labels.
TrainedModel train_model(const HyperParams& params, const DesignMatrix& X,
                         const std::vector<int>& y, uint64_t seed, const ColumnCatalog& catalog,
                         int jobs = 1);

double sigmoid(double z);

}  // namespace diab
