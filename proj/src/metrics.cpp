#include "diab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diab/errors.hpp"

namespace diab {

bool classify_diabetic(double p_bar, double t) { return p_bar >= 1.0 - t; }

std::vector<int> predictions_at(const std::vector<double>& scores, double t) {
  std::vector<int> pred(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) pred[i] = classify_diabetic(scores[i], t) ? 1 : 0;
  return pred;
}

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size())
    throw ArgumentError("score count does not match label count");
  size_t n_pos = 0, n_neg = 0;
  for (int y : labels) {
    if (y == 1) ++n_pos;
    else if (y == 0) ++n_neg;
    else throw ArgumentError("labels must be 0 or 1");
  }
  if (n_pos == 0 || n_neg == 0)
    throw ArgumentError("roc curve is undefined when only one class is present");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  size_t tp = 0, fp = 0;
  size_t i = 0;
  double auc = 0.0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  while (i < order.size()) {
    const double v = scores[order[i]];
    // tied scores fall together: one point per distinct threshold
    while (i < order.size() && scores[order[i]] == v) {
      if (labels[order[i]] == 1) ++tp;
      else ++fp;
      ++i;
    }
    const double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
    const double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
    curve.points.push_back({fpr, tpr});
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  curve.auc = auc;
  return curve;
}

namespace {

ClassMetrics class_metrics(size_t correct, size_t predicted, size_t actual) {
  ClassMetrics m;
  m.support = actual;
  m.precision = predicted > 0 ? static_cast<double>(correct) / static_cast<double>(predicted)
                              : 0.0;
  m.recall = static_cast<double>(correct) / static_cast<double>(actual);
  const double denom = m.precision + m.recall;
  m.f1 = denom > 0.0 ? 2.0 * m.precision * m.recall / denom : 0.0;
  return m;
}

}  // namespace

nlohmann::json MetricsAtT::to_json() const {
  auto cls = [](const ClassMetrics& m) {
    return nlohmann::json{{"precision", m.precision},
                          {"recall", m.recall},
                          {"f1", m.f1},
                          {"support", m.support}};
  };
  return {{"confusion", {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}}},
          {"diabetic", cls(diabetic)},
          {"non_diabetic", cls(non_diabetic)},
          {"weighted_precision", weighted_precision},
          {"weighted_recall", weighted_recall},
          {"weighted_f1", weighted_f1},
          {"accuracy", accuracy}};
}

MetricsAtT classification_metrics(const std::vector<int>& predictions,
                                  const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    throw ArgumentError("prediction count does not match label count");
  if (labels.empty()) throw ArgumentError("metrics require at least one sample");
  MetricsAtT m;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool pred = predictions[i] == 1;
    const bool truth = labels[i] == 1;
    if ((predictions[i] != 0 && predictions[i] != 1) || (labels[i] != 0 && labels[i] != 1))
      throw ArgumentError("predictions and labels must be 0 or 1");
    if (pred && truth) ++m.tp;
    else if (pred && !truth) ++m.fp;
    else if (!pred && truth) ++m.fn;
    else ++m.tn;
  }
  const size_t n_pos = m.tp + m.fn;
  const size_t n_neg = m.tn + m.fp;
  if (n_pos == 0 || n_neg == 0)
    throw ArgumentError("per-class recall is undefined when a class has no samples");
  m.diabetic = class_metrics(m.tp, m.tp + m.fp, n_pos);
  m.non_diabetic = class_metrics(m.tn, m.tn + m.fn, n_neg);
  const double n = static_cast<double>(labels.size());
  const double wp = static_cast<double>(n_pos) / n;
  const double wn = static_cast<double>(n_neg) / n;
  m.weighted_precision = wp * m.diabetic.precision + wn * m.non_diabetic.precision;
  m.weighted_recall = wp * m.diabetic.recall + wn * m.non_diabetic.recall;
  m.weighted_f1 = wp * m.diabetic.f1 + wn * m.non_diabetic.f1;
  m.accuracy = static_cast<double>(m.tp + m.tn) / n;
  return m;
}

RecallCurves recall_vs_threshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels, size_t grid_points) {
  if (grid_points < 2) throw ArgumentError("recall curve needs at least two grid points");
  if (scores.size() != labels.size())
    throw ArgumentError("score count does not match label count");
  size_t n_pos = 0, n_neg = 0;
  for (int y : labels) {
    if (y == 1) ++n_pos;
    else if (y == 0) ++n_neg;
    else throw ArgumentError("labels must be 0 or 1");
  }
  if (n_pos == 0 || n_neg == 0)
    throw ArgumentError("recall curves require both classes");
  RecallCurves curves;
  curves.t_grid.resize(grid_points);
  curves.diabetic.resize(grid_points);
  curves.non_diabetic.resize(grid_points);
  for (size_t g = 0; g < grid_points; ++g) {
    const double t = static_cast<double>(g) / static_cast<double>(grid_points - 1);
    size_t tp = 0, tn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const bool pred = classify_diabetic(scores[i], t);
      if (labels[i] == 1 && pred) ++tp;
      if (labels[i] == 0 && !pred) ++tn;
    }
    curves.t_grid[g] = t;
    curves.diabetic[g] = static_cast<double>(tp) / static_cast<double>(n_pos);
    curves.non_diabetic[g] = static_cast<double>(tn) / static_cast<double>(n_neg);
  }
  return curves;
}

double choose_threshold(const std::vector<double>& scores, const std::vector<int>& labels,
                        double target_recall, size_t grid_points) {
  if (!(target_recall > 0.0) || target_recall > 1.0)
    throw ArgumentError("target recall must lie in (0, 1]");
  const RecallCurves curves = recall_vs_threshold(scores, labels, grid_points);
  for (size_t g = 0; g < curves.t_grid.size(); ++g)
    if (curves.diabetic[g] >= target_recall) return curves.t_grid[g];
  // unreachable: T = 1.0 classifies everyone diabetic, recall 1
  throw ArgumentError("no grid threshold reaches the target recall");
}

ScreeningSummary screening_summary(long long n_total, double prop_negative,
                                   double negative_recall) {
  if (n_total < 0) throw ArgumentError("screening population must be non-negative");
  if (prop_negative < 0.0 || prop_negative > 1.0)
    throw ArgumentError("negative proportion must lie in [0, 1]");
  if (negative_recall < 0.0 || negative_recall > 1.0)
    throw ArgumentError("negative recall must lie in [0, 1]");
  ScreeningSummary s;
  s.eliminated = static_cast<long long>(
      std::floor(static_cast<double>(n_total) * prop_negative * negative_recall));
  s.to_notify = n_total - s.eliminated;
  return s;
}

}  // namespace diab
