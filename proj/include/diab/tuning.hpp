#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "diab/cohort.hpp"
#include "diab/encode.hpp"
#include "diab/impute.hpp"
#include "diab/model.hpp"

namespace diab {

struct Grid {
  ModelKind kind = ModelKind::logistic_regression;
  std::vector<HyperParams> candidates;
  nlohmann::json source;  // per-parameter value lists, kept for config echo
};

// Cartesian product of per-parameter value lists; earlier parameters
// vary slowest (declaration order per kind, see grid key docs).
Grid grid_from_json(ModelKind kind, const nlohmann::json& lists);
nlohmann::json default_grid_json(ModelKind kind);
Grid default_grid(ModelKind kind);

// Per-fold preprocessing: imputation and encoding fitted on the
// non-validation rows only, so validation samples never leak into the
// statistics.
struct FoldData {
  std::vector<size_t> fit_rows;
  std::vector<size_t> val_rows;
  ImputationPlan plan;
  FeatureEncoder encoder;
  DesignMatrix fit_X;
  DesignMatrix val_X;
  std::vector<int> fit_y;
  std::vector<int> val_y;
};

FoldData encode_fold(const Cohort& train, const std::vector<size_t>& val_rows,
                     const FeatureSchema& schema);

struct CandidateResult {
  HyperParams params;
  std::vector<double> fold_aucs;
  double mean_auc = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string failure;
};

struct CVResult {
  ModelKind kind = ModelKind::logistic_regression;
  int folds = 0;
  uint64_t fold_seed = 0;
  std::vector<CandidateResult> candidates;
  size_t best_index = 0;
  std::optional<TrainedModel> best_model;  // best candidate refit on the full partition
  ImputationPlan final_plan;
  FeatureEncoder final_encoder;

  nlohmann::json report_json() const;
  std::string report_csv() const;
};

// 10-fold (by default k) cross-validated grid search selecting by mean
// validation AUC, ties to the earlier candidate. Candidate training
// failures are recorded per candidate rather than aborting the search.
CVResult grid_search(const Grid& grid, const Cohort& train, const FeatureSchema& schema, int k,
                     uint64_t seed, int jobs = 1);

}  // namespace diab
