#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace diab {

// Decision rule for the reported boundary T: diabetic iff the
// averaged probability reaches the internal cutoff 1 - T, so raising T
// flags more people.
bool classify_diabetic(double p_bar, double t);

std::vector<int> predictions_at(const std::vector<double>& scores, double t);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // threshold +inf down to -inf
  double auc = 0.0;
};

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;
};

struct MetricsAtT {
  size_t tp = 0, fp = 0, fn = 0, tn = 0;
  ClassMetrics diabetic;
  ClassMetrics non_diabetic;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  double accuracy = 0.0;

  nlohmann::json to_json() const;
};

// Confusion counts and per-class precision/recall/F1 plus
// support-weighted averages. Precision with no predicted members of a
// class is 0 by convention; single-class labels are rejected.
MetricsAtT classification_metrics(const std::vector<int>& predictions,
                                  const std::vector<int>& labels);

struct RecallCurves {
  std::vector<double> t_grid;
  std::vector<double> diabetic;      // non-decreasing in T
  std::vector<double> non_diabetic;  // non-increasing in T
};

RecallCurves recall_vs_threshold(const std::vector<double>& scores,
                                 const std::vector<int>& labels, size_t grid_points = 101);

// Smallest grid T whose diabetic recall reaches the target.
double choose_threshold(const std::vector<double>& scores, const std::vector<int>& labels,
                        double target_recall, size_t grid_points = 101);

struct ScreeningSummary {
  long long eliminated = 0;
  long long to_notify = 0;
};

ScreeningSummary screening_summary(long long n_total, double prop_negative,
                                   double negative_recall);

}  // namespace diab
