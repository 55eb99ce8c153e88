#pragma once

#include "diab/model.hpp"
#include "diab/tree.hpp"

namespace diab {

// Additive log-odds model: init_score plus a sum of regression trees
// whose leaf values already include the learning rate.
class BoostingClassifier final : public Classifier {
 public:
  BoostingClassifier(double init_score, std::vector<Tree> trees,
                     std::vector<double> importances, std::vector<double> staged_losses,
                     size_t width);

  ModelKind kind() const override { return ModelKind::gradient_boosting; }
  nlohmann::json params_json() const override;
  const std::vector<double>* column_importances() const override { return &importances_; }

  double init_score() const { return init_score_; }
  const std::vector<Tree>& trees() const { return trees_; }
  // Training log-loss after each stage (element 0 = after stage 1).
  const std::vector<double>& staged_losses() const { return staged_losses_; }

  double decision_score(std::span<const double> x) const;

 protected:
  double proba_impl(std::span<const double> x) const override;

 private:
  double init_score_ = 0.0;
  std::vector<Tree> trees_;
  std::vector<double> importances_;
  std::vector<double> staged_losses_;
};

std::unique_ptr<Classifier> train_boosting(const BoostParams& params, const DesignMatrix& X,
                                           const std::vector<int>& y);
std::unique_ptr<Classifier> boosting_from_json(const nlohmann::json& j);

}  // namespace diab
