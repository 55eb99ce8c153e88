#include "diab/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diab/errors.hpp"

namespace diab {

KnnClassifier::KnnClassifier(KnnParams params, DesignMatrix train, std::vector<int> labels)
    : params_(params), train_(std::move(train)), labels_(std::move(labels)) {
  if (train_.rows == 0) throw TrainingError("knn requires at least one training sample");
  if (train_.rows != labels_.size())
    throw ShapeError("label count does not match design matrix rows");
  width_ = train_.cols;
}

int KnnClassifier::effective_k() const {
  return static_cast<int>(std::min<size_t>(static_cast<size_t>(params_.k), train_.rows));
}

double KnnClassifier::proba_impl(std::span<const double> x) const {
  const size_t k = static_cast<size_t>(effective_k());
  std::vector<std::pair<double, size_t>> dist(train_.rows);
  for (size_t i = 0; i < train_.rows; ++i) {
    const auto ri = train_.row(i);
    double d2 = 0.0;
    for (size_t j = 0; j < train_.cols; ++j) {
      const double diff = x[j] - ri[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  // (distance, index) lexicographic order makes neighbor choice total
  if (k < train_.rows)
    std::nth_element(dist.begin(), dist.begin() + static_cast<long>(k) - 1, dist.end());
  std::sort(dist.begin(), dist.begin() + static_cast<long>(k));

  if (params_.weighting == KnnWeighting::uniform) {
    double pos = 0.0;
    for (size_t i = 0; i < k; ++i) pos += labels_[dist[i].second];
    return pos / static_cast<double>(k);
  }
  // inverse distance: exact matches take over completely
  size_t zeros = 0;
  double zero_pos = 0.0;
  for (size_t i = 0; i < k; ++i) {
    if (dist[i].first == 0.0) {
      ++zeros;
      zero_pos += labels_[dist[i].second];
    }
  }
  if (zeros > 0) return zero_pos / static_cast<double>(zeros);
  double wsum = 0.0, pos = 0.0;
  for (size_t i = 0; i < k; ++i) {
    const double w = 1.0 / std::sqrt(dist[i].first);
    wsum += w;
    pos += w * labels_[dist[i].second];
  }
  return pos / wsum;
}

nlohmann::json KnnClassifier::params_json() const {
  return {{"k", params_.k},
          {"weighting", to_string(params_.weighting)},
          {"rows", train_.rows},
          {"cols", train_.cols},
          {"data", train_.data},
          {"labels", labels_}};
}

std::unique_ptr<Classifier> train_knn(const KnnParams& params, const DesignMatrix& X,
                                      const std::vector<int>& y) {
  return std::make_unique<KnnClassifier>(params, X, y);
}

std::unique_ptr<Classifier> knn_from_json(const nlohmann::json& j) {
  KnnParams params;
  params.k = j.at("k").get<int>();
  params.weighting = knn_weighting_from_string(j.at("weighting").get<std::string>());
  DesignMatrix train;
  train.rows = j.at("rows").get<size_t>();
  train.cols = j.at("cols").get<size_t>();
  train.data = j.at("data").get<std::vector<double>>();
  if (train.data.size() != train.rows * train.cols)
    throw ArtifactError("knn artifact data length does not match its dimensions");
  return std::make_unique<KnnClassifier>(params, std::move(train),
                                         j.at("labels").get<std::vector<int>>());
}

}  // namespace diab
