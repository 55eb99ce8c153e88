#pragma once

#include "diab/metrics.hpp"
#include "diab/model.hpp"

namespace diab {

// Five members, one per model kind, combined by an unweighted
// probability average and classified against the boundary T.
class EnsembleModel {
 public:
  EnsembleModel(std::vector<TrainedModel> members, double decision_boundary_t);

  const std::vector<TrainedModel>& members() const { return members_; }
  double decision_boundary() const { return t_; }
  double internal_cutoff() const { return 1.0 - t_; }
  void set_decision_boundary(double t);

  std::vector<double> member_probas(std::span<const double> x) const;
  double proba(std::span<const double> x) const;
  std::vector<double> proba_rows(const DesignMatrix& X) const;
  bool classify(std::span<const double> x) const { return classify_diabetic(proba(x), t_); }

  nlohmann::json to_json() const;
  static EnsembleModel from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static EnsembleModel load(const std::string& path);

 private:
  std::vector<TrainedModel> members_;
  double t_ = 0.5;
};

}  // namespace diab
