#pragma once

#include "diab/model.hpp"
#include "diab/platt.hpp"

namespace diab {

class SvmClassifier final : public Classifier {
 public:
  SvmClassifier(std::vector<double> weights, double bias, PlattScaling platt);

  ModelKind kind() const override { return ModelKind::svm_linear; }
  nlohmann::json params_json() const override;

  double margin(std::span<const double> x) const;
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const PlattScaling& platt() const { return platt_; }

 protected:
  double proba_impl(std::span<const double> x) const override;

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  PlattScaling platt_;
};

std::unique_ptr<Classifier> train_svm(const SvmParams& params, const DesignMatrix& X,
                                      const std::vector<int>& y, uint64_t seed);
std::unique_ptr<Classifier> svm_from_json(const nlohmann::json& j);

}  // namespace diab
