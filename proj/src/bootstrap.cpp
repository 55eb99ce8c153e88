#include "diab/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "diab/encode.hpp"
#include "diab/errors.hpp"
#include "diab/impute.hpp"
#include "diab/metrics.hpp"
#include "diab/parallel.hpp"
#include "diab/seeds.hpp"

namespace diab {

namespace {

constexpr size_t kGridPoints = 101;
constexpr int kMaxRedraws = 100;

}  // namespace

double order_statistic_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ArgumentError("quantile of an empty list");
  if (p <= 0.0 || p > 1.0) throw ArgumentError("quantile level must lie in (0, 1]");
  const size_t n = values.size();
  size_t rank = static_cast<size_t>(std::ceil(p * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(rank - 1), values.end());
  return values[rank - 1];
}

std::vector<double> interpolate_roc(const std::vector<double>& fpr,
                                    const std::vector<double>& tpr,
                                    const std::vector<double>& grid) {
  if (fpr.size() != tpr.size() || fpr.empty())
    throw ArgumentError("roc interpolation needs matching nonempty coordinate lists");
  // collapse vertical segments: one (fpr, max tpr) vertex per fpr value
  std::vector<double> xs, ys;
  xs.reserve(fpr.size());
  ys.reserve(fpr.size());
  for (size_t i = 0; i < fpr.size(); ++i) {
    if (!xs.empty() && fpr[i] == xs.back()) {
      ys.back() = std::max(ys.back(), tpr[i]);
    } else {
      xs.push_back(fpr[i]);
      ys.push_back(tpr[i]);
    }
  }
  std::vector<double> out(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    if (x <= xs.front()) {
      out[g] = ys.front();
    } else if (x >= xs.back()) {
      out[g] = ys.back();
    } else {
      const auto it = std::lower_bound(xs.begin(), xs.end(), x);
      const size_t hi = static_cast<size_t>(it - xs.begin());
      if (xs[hi] == x) {
        out[g] = ys[hi];
      } else {
        const size_t lo = hi - 1;
        const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
        out[g] = ys[lo] + w * (ys[hi] - ys[lo]);
      }
    }
  }
  return out;
}

nlohmann::json BootstrapBand::to_json() const {
  return {{"format_version", 1},
          {"n_boot", n_boot},
          {"fpr_grid", fpr_grid},
          {"mean_tpr", mean_tpr},
          {"lower_tpr", lower_tpr},
          {"upper_tpr", upper_tpr},
          {"replicate_aucs", replicate_aucs},
          {"mean_auc", mean_auc},
          {"auc_lower", auc_lower},
          {"auc_upper", auc_upper}};
}

BootstrapBand bootstrap_roc(const Cohort& train, const Cohort& test,
                            const FeatureSchema& schema, const HyperParams& params,
                            size_t n_boot, uint64_t seed, int jobs) {
  if (n_boot < 2) throw ArgumentError("bootstrap requires n_boot >= 2");
  if (train.n() == 0 || test.n() == 0)
    throw ArgumentError("bootstrap requires nonempty train and test cohorts");
  validate_params(params);

  BootstrapBand band;
  band.n_boot = n_boot;
  band.fpr_grid.resize(kGridPoints);
  for (size_t g = 0; g < kGridPoints; ++g)
    band.fpr_grid[g] = static_cast<double>(g) / static_cast<double>(kGridPoints - 1);

  const size_t n = train.n();
  std::vector<std::vector<double>> tpr_rows(n_boot);
  band.replicate_aucs.assign(n_boot, 0.0);

  parallel_for(n_boot, jobs, [&](size_t r) {
    Rng rng(derive_seed(seed, "boot", r));
    std::vector<size_t> rows(n);
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRedraws && !ok; ++attempt) {
      size_t pos = 0;
      for (size_t i = 0; i < n; ++i) {
        rows[i] = static_cast<size_t>(rng.uniform_int(0, n - 1));
        pos += (train.labels[rows[i]] == 1);
      }
      ok = pos > 0 && pos < n;
    }
    if (!ok)
      throw TrainingError("bootstrap replicate " + std::to_string(r) +
                          " kept drawing single-class resamples");
    const Cohort resample = train.subset(rows);
    const ImputationPlan plan = fit_imputer(resample, schema);
    const Cohort fit_full = apply_imputer(plan, resample);
    const FeatureEncoder encoder = FeatureEncoder::fit(fit_full, schema);
    const DesignMatrix X = encoder.transform(fit_full);
    const TrainedModel model = train_model(params, X, fit_full.labels,
                                           derive_seed(seed, "boot-model", r),
                                           encoder.catalog(), 1);
    const Cohort test_full = apply_imputer(plan, test);
    const DesignMatrix Xt = encoder.transform(test_full);
    const std::vector<double> scores = model.predict_proba_rows(Xt);
    const RocCurve curve = roc_curve(scores, test_full.labels);
    std::vector<double> fpr, tpr;
    fpr.reserve(curve.points.size());
    tpr.reserve(curve.points.size());
    for (const RocPoint& p : curve.points) {
      fpr.push_back(p.fpr);
      tpr.push_back(p.tpr);
    }
    tpr_rows[r] = interpolate_roc(fpr, tpr, band.fpr_grid);
    band.replicate_aucs[r] = curve.auc;
  });

  band.mean_tpr.assign(kGridPoints, 0.0);
  band.lower_tpr.assign(kGridPoints, 0.0);
  band.upper_tpr.assign(kGridPoints, 0.0);
  std::vector<double> column(n_boot);
  for (size_t g = 0; g < kGridPoints; ++g) {
    double sum = 0.0;
    for (size_t r = 0; r < n_boot; ++r) {
      column[r] = tpr_rows[r][g];
      sum += column[r];
    }
    band.mean_tpr[g] = sum / static_cast<double>(n_boot);
    band.lower_tpr[g] = order_statistic_quantile(column, 0.025);
    band.upper_tpr[g] = order_statistic_quantile(column, 0.975);
  }
  double auc_sum = 0.0;
  for (double a : band.replicate_aucs) auc_sum += a;
  band.mean_auc = auc_sum / static_cast<double>(n_boot);
  band.auc_lower = order_statistic_quantile(band.replicate_aucs, 0.025);
  band.auc_upper = order_statistic_quantile(band.replicate_aucs, 0.975);
  return band;
}

}  // namespace diab
