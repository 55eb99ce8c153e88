#pragma once

#include "diab/model.hpp"

namespace diab {

class LogisticClassifier final : public Classifier {
 public:
  LogisticClassifier(std::vector<double> weights, double intercept, size_t iterations,
                     bool converged);

  ModelKind kind() const override { return ModelKind::logistic_regression; }
  nlohmann::json params_json() const override;

  const std::vector<double>& weights() const { return weights_; }
  double intercept() const { return intercept_; }
  size_t iterations() const { return iterations_; }
  bool converged() const { return converged_; }

 protected:
  double proba_impl(std::span<const double> x) const override;

 private:
  std::vector<double> weights_;
  double intercept_ = 0.0;
  size_t iterations_ = 0;
  bool converged_ = false;
};

// Objective: mean log-loss + l2/(2n) * ||w||^2, intercept unpenalized.
// Returns the objective and fills the gradient wrt weights and intercept.
double logistic_loss_and_gradient(const DesignMatrix& X, const std::vector<int>& y,
                                  const std::vector<double>& weights, double intercept,
                                  double l2_strength, std::vector<double>& grad_w,
                                  double& grad_b);

std::unique_ptr<Classifier> train_logistic(const LogisticParams& params, const DesignMatrix& X,
                                           const std::vector<int>& y);
std::unique_ptr<Classifier> logistic_from_json(const nlohmann::json& j);

}  // namespace diab
