#pragma once

#include "diab/model.hpp"
#include "diab/tree.hpp"

namespace diab {

// Every tree sees the full training sample; randomness comes only from
// per-split column subsampling under per-tree derived seeds.
class ForestClassifier final : public Classifier {
 public:
  ForestClassifier(std::vector<Tree> trees, std::vector<double> importances, size_t width);

  ModelKind kind() const override { return ModelKind::random_forest; }
  nlohmann::json params_json() const override;
  const std::vector<double>* column_importances() const override { return &importances_; }

  const std::vector<Tree>& trees() const { return trees_; }

 protected:
  double proba_impl(std::span<const double> x) const override;

 private:
  std::vector<Tree> trees_;
  std::vector<double> importances_;
};

std::unique_ptr<Classifier> train_forest(const ForestParams& params, const DesignMatrix& X,
                                         const std::vector<int>& y, uint64_t seed, int jobs);
std::unique_ptr<Classifier> forest_from_json(const nlohmann::json& j);

}  // namespace diab
