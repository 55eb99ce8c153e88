#pragma once

#include "diab/cohort.hpp"
#include "diab/model.hpp"
#include "diab/schema.hpp"

namespace diab {

struct BootstrapBand {
  size_t n_boot = 0;
  std::vector<double> fpr_grid;   // fixed grid, 101 points over [0, 1]
  std::vector<double> mean_tpr;
  std::vector<double> lower_tpr;  // pointwise 2.5% empirical quantile
  std::vector<double> upper_tpr;  // pointwise 97.5% empirical quantile
  std::vector<double> replicate_aucs;  // in replicate order
  double mean_auc = 0.0;
  double auc_lower = 0.0;
  double auc_upper = 0.0;

  nlohmann::json to_json() const;
};

// Empirical quantile as the ceil(p*n)-th order statistic (1-indexed).
double order_statistic_quantile(std::vector<double> values, double p);

// Linear interpolation of a ROC curve onto a fixed FPR grid; repeated
// FPR values collapse to their highest TPR first.
std::vector<double> interpolate_roc(const std::vector<double>& fpr,
                                    const std::vector<double>& tpr,
                                    const std::vector<double>& grid);

// Resamples the training cohort with replacement (same size), refits
// imputation/encoding and the model per replicate, scores the untouched
// test cohort, and aggregates pointwise quantile bands over the grid.
BootstrapBand bootstrap_roc(const Cohort& train, const Cohort& test,
                            const FeatureSchema& schema, const HyperParams& params,
                            size_t n_boot, uint64_t seed, int jobs = 1);

}  // namespace diab
