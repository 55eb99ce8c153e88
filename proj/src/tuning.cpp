#include "diab/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "diab/csv.hpp"
#include "diab/errors.hpp"
#include "diab/folds.hpp"
#include "diab/metrics.hpp"
#include "diab/parallel.hpp"
#include "diab/seeds.hpp"

namespace diab {

namespace {

std::vector<std::string> grid_keys(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return {"l2_strength"};
    case ModelKind::knn: return {"k", "weighting"};
    case ModelKind::random_forest: return {"n_trees", "max_depth", "features_per_split"};
    case ModelKind::gradient_boosting: return {"n_stages", "learning_rate", "max_depth"};
    case ModelKind::svm_linear: return {"cost_c"};
  }
  throw ArgumentError("invalid model kind value");
}

}  // namespace

Grid grid_from_json(ModelKind kind, const nlohmann::json& lists) {
  const std::vector<std::string> keys = grid_keys(kind);
  std::vector<nlohmann::json> values(keys.size());
  size_t total = 1;
  for (size_t p = 0; p < keys.size(); ++p) {
    if (!lists.contains(keys[p]))
      throw ArgumentError("grid for " + to_string(kind) + " is missing key: " + keys[p]);
    values[p] = lists.at(keys[p]);
    if (!values[p].is_array() || values[p].empty())
      throw ArgumentError("grid key " + keys[p] + " must be a nonempty list");
    total *= values[p].size();
  }
  for (auto it = lists.begin(); it != lists.end(); ++it)
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
      throw ArgumentError("grid for " + to_string(kind) + " has unknown key: " + it.key());

  Grid grid;
  grid.kind = kind;
  grid.source = lists;
  grid.candidates.reserve(total);
  std::vector<size_t> odo(keys.size(), 0);
  for (size_t c = 0; c < total; ++c) {
    nlohmann::json point;
    for (size_t p = 0; p < keys.size(); ++p) point[keys[p]] = values[p][odo[p]];
    HyperParams params = hyperparams_from_json(kind, point);
    validate_params(params);
    grid.candidates.push_back(std::move(params));
    // odometer: last key varies fastest
    for (size_t p = keys.size(); p-- > 0;) {
      if (++odo[p] < values[p].size()) break;
      odo[p] = 0;
    }
  }
  return grid;
}

nlohmann::json default_grid_json(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic_regression: return {{"l2_strength", {0.01, 0.1, 1.0, 10.0}}};
    case ModelKind::knn:
      return {{"k", {5, 15, 35, 75}}, {"weighting", {"uniform", "inverse_distance"}}};
    case ModelKind::random_forest:
      return {{"n_trees", {100, 300}},
              {"max_depth", {6, 12, 0}},
              {"features_per_split", {"sqrt", "half"}}};
    case ModelKind::gradient_boosting:
      return {{"n_stages", {100, 300}}, {"learning_rate", {0.05, 0.1}}, {"max_depth", {2, 3}}};
    case ModelKind::svm_linear: return {{"cost_c", {0.1, 1.0, 10.0}}};
  }
  throw ArgumentError("invalid model kind value");
}

Grid default_grid(ModelKind kind) { return grid_from_json(kind, default_grid_json(kind)); }

FoldData encode_fold(const Cohort& train, const std::vector<size_t>& val_rows,
                     const FeatureSchema& schema) {
  FoldData fold;
  fold.val_rows = val_rows;
  std::vector<uint8_t> held(train.n(), 0);
  for (size_t r : val_rows) {
    if (r >= train.n()) throw ArgumentError("validation row out of range");
    held[r] = 1;
  }
  fold.fit_rows.reserve(train.n() - val_rows.size());
  for (size_t r = 0; r < train.n(); ++r)
    if (!held[r]) fold.fit_rows.push_back(r);

  const Cohort fit_part = train.subset(fold.fit_rows);
  const Cohort val_part = train.subset(fold.val_rows);
  fold.plan = fit_imputer(fit_part, schema);
  const Cohort fit_full = apply_imputer(fold.plan, fit_part);
  const Cohort val_full = apply_imputer(fold.plan, val_part);
  fold.encoder = FeatureEncoder::fit(fit_full, schema);
  fold.fit_X = fold.encoder.transform(fit_full);
  fold.val_X = fold.encoder.transform(val_full);
  fold.fit_y = fit_full.labels;
  fold.val_y = val_full.labels;
  return fold;
}

nlohmann::json CVResult::report_json() const {
  nlohmann::json cands = nlohmann::json::array();
  for (const CandidateResult& c : candidates) {
    nlohmann::json row;
    row["params"] = hyperparams_to_json(c.params);
    row["describe"] = describe_params(c.params);
    row["failed"] = c.failed;
    if (c.failed) {
      row["failure"] = c.failure;
      row["fold_aucs"] = nlohmann::json::array();
      row["mean_auc"] = nullptr;
    } else {
      row["fold_aucs"] = c.fold_aucs;
      row["mean_auc"] = c.mean_auc;
    }
    cands.push_back(std::move(row));
  }
  return {{"format_version", 1},
          {"kind", to_string(kind)},
          {"folds", folds},
          {"fold_seed", fold_seed},
          {"best_index", best_index},
          {"best_params", hyperparams_to_json(candidates[best_index].params)},
          {"candidates", std::move(cands)}};
}

std::string CVResult::report_csv() const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  CsvTable table;
  table.header = {"candidate", "params", "selected"};
  for (int f = 0; f < folds; ++f) table.header.push_back("fold_" + std::to_string(f));
  table.header.push_back("mean_auc");
  table.header.push_back("failure");
  for (size_t c = 0; c < candidates.size(); ++c) {
    const CandidateResult& cand = candidates[c];
    std::vector<std::string> row = {std::to_string(c), describe_params(cand.params),
                                    c == best_index ? "1" : "0"};
    for (int f = 0; f < folds; ++f)
      row.push_back(cand.failed ? "" : num(cand.fold_aucs[static_cast<size_t>(f)]));
    row.push_back(cand.failed ? "" : num(cand.mean_auc));
    row.push_back(cand.failure);
    table.rows.push_back(std::move(row));
  }
  std::string out;
  out += format_row(table.header, ',');
  for (const auto& row : table.rows) out += format_row(row, ',');
  return out;
}

CVResult grid_search(const Grid& grid, const Cohort& train, const FeatureSchema& schema, int k,
                     uint64_t seed, int jobs) {
  if (grid.candidates.empty()) throw ArgumentError("grid has no candidates");
  for (const HyperParams& p : grid.candidates)
    if (kind_of(p) != grid.kind)
      throw ArgumentError("grid candidate kind does not match the grid's model kind");

  CVResult result;
  result.kind = grid.kind;
  result.folds = k;
  result.fold_seed = derive_seed(seed, "cv");
  const auto fold_sets = kfold_indices(train.n(), k, train.labels, result.fold_seed);

  std::vector<FoldData> folds(fold_sets.size());
  for (size_t f = 0; f < fold_sets.size(); ++f) folds[f] = encode_fold(train, fold_sets[f], schema);

  const size_t n_cand = grid.candidates.size();
  const size_t n_tasks = n_cand * folds.size();
  std::vector<double> task_auc(n_tasks, 0.0);
  std::vector<std::string> task_failure(n_tasks);
  parallel_for(n_tasks, jobs, [&](size_t task) {
    const size_t c = task / folds.size();
    const size_t f = task % folds.size();
    const FoldData& fold = folds[f];
    try {
      TrainedModel model =
          train_model(grid.candidates[c], fold.fit_X, fold.fit_y,
                      derive_seed(seed, "cv-model", task), fold.encoder.catalog(), 1);
      const std::vector<double> scores = model.predict_proba_rows(fold.val_X);
      task_auc[task] = roc_curve(scores, fold.val_y).auc;
    } catch (const std::exception& e) {
      task_failure[task] = e.what();
      if (task_failure[task].empty()) task_failure[task] = "unknown training failure";
    }
  });

  result.candidates.reserve(n_cand);
  for (size_t c = 0; c < n_cand; ++c) {
    CandidateResult cand;
    cand.params = grid.candidates[c];
    for (size_t f = 0; f < folds.size(); ++f) {
      const size_t task = c * folds.size() + f;
      if (!task_failure[task].empty() && !cand.failed) {
        cand.failed = true;
        cand.failure = "fold " + std::to_string(f) + ": " + task_failure[task];
      }
      cand.fold_aucs.push_back(task_auc[task]);
    }
    if (cand.failed) {
      cand.fold_aucs.clear();
      cand.mean_auc = std::numeric_limits<double>::quiet_NaN();
    } else {
      double sum = 0.0;
      for (double a : cand.fold_aucs) sum += a;
      cand.mean_auc = sum / static_cast<double>(cand.fold_aucs.size());
    }
    result.candidates.push_back(std::move(cand));
  }

  bool any_ok = false;
  for (size_t c = 0; c < n_cand; ++c) {
    const CandidateResult& cand = result.candidates[c];
    if (cand.failed) continue;
    if (!any_ok || cand.mean_auc > result.candidates[result.best_index].mean_auc) {
      result.best_index = c;
      any_ok = true;
    }
  }
  if (!any_ok)
    throw TrainingError("every candidate in the " + to_string(grid.kind) +
                        " grid failed cross-validation");

  result.final_plan = fit_imputer(train, schema);
  const Cohort full = apply_imputer(result.final_plan, train);
  result.final_encoder = FeatureEncoder::fit(full, schema);
  const DesignMatrix X = result.final_encoder.transform(full);
  result.best_model =
      train_model(result.candidates[result.best_index].params, X, full.labels,
                  derive_seed(seed, "final"), result.final_encoder.catalog(), jobs);
  return result;
}

}  // namespace diab
