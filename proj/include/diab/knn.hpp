#pragma once

#include "diab/model.hpp"

namespace diab {

// Stores the full training sample; neighbors are found by Euclidean
// distance with ties broken by lower training-row index.
class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(KnnParams params, DesignMatrix train, std::vector<int> labels);

  ModelKind kind() const override { return ModelKind::knn; }
  nlohmann::json params_json() const override;

  size_t n_train() const { return train_.rows; }
  int effective_k() const;

 protected:
  double proba_impl(std::span<const double> x) const override;

 private:
  KnnParams params_;
  DesignMatrix train_;
  std::vector<int> labels_;
};

std::unique_ptr<Classifier> train_knn(const KnnParams& params, const DesignMatrix& X,
                                      const std::vector<int>& y);
std::unique_ptr<Classifier> knn_from_json(const nlohmann::json& j);

}  // namespace diab
