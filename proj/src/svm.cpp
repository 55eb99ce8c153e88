#include "diab/svm.hpp"

#include <cmath>
#include <numeric>

#include "diab/errors.hpp"
#include "diab/folds.hpp"
#include "diab/seeds.hpp"

namespace diab {

namespace {

constexpr int kEpochs = 500;

struct LinearFit {
  std::vector<double> w;
  double b = 0.0;
};

// Full-batch Pegasos on the rows given: hinge loss with L2 strength
// lambda = 1/(C*n), step 1/(lambda*t), iterate projected onto the ball
// of radius 1/sqrt(lambda). The bias stays unregularized and
// unprojected.
LinearFit pegasos_fit(const DesignMatrix& X, const std::vector<int>& y,
                      const std::vector<size_t>& rows, double cost_c) {
  const double n = static_cast<double>(rows.size());
  const double lambda = 1.0 / (cost_c * n);
  const double radius = 1.0 / std::sqrt(lambda);
  LinearFit fit;
  fit.w.assign(X.cols, 0.0);
  std::vector<double> grad(X.cols);
  for (int t = 1; t <= kEpochs; ++t) {
    const double eta = 1.0 / (lambda * static_cast<double>(t));
    for (size_t j = 0; j < X.cols; ++j) grad[j] = lambda * fit.w[j];
    double grad_b = 0.0;
    for (size_t r : rows) {
      const auto xi = X.row(r);
      const double s = y[r] == 1 ? 1.0 : -1.0;
      double m = fit.b;
      for (size_t j = 0; j < X.cols; ++j) m += fit.w[j] * xi[j];
      if (s * m < 1.0) {
        for (size_t j = 0; j < X.cols; ++j) grad[j] -= (s / n) * xi[j];
        grad_b -= s / n;
      }
    }
    for (size_t j = 0; j < X.cols; ++j) fit.w[j] -= eta * grad[j];
    fit.b -= eta * grad_b;
    double norm2 = 0.0;
    for (double v : fit.w) norm2 += v * v;
    const double norm = std::sqrt(norm2);
    if (norm > radius) {
      const double scale = radius / norm;
      for (double& v : fit.w) v *= scale;
    }
  }
  return fit;
}

double margin_of(const LinearFit& fit, std::span<const double> x) {
  double m = fit.b;
  for (size_t j = 0; j < fit.w.size(); ++j) m += fit.w[j] * x[j];
  return m;
}

}  // namespace

SvmClassifier::SvmClassifier(std::vector<double> weights, double bias, PlattScaling platt)
    : weights_(std::move(weights)), bias_(bias), platt_(platt) {
  width_ = weights_.size();
}

double SvmClassifier::margin(std::span<const double> x) const {
  if (x.size() != width_)
    throw ShapeError("feature vector has " + std::to_string(x.size()) + " columns, expected " +
                     std::to_string(width_));
  double m = bias_;
  for (size_t j = 0; j < weights_.size(); ++j) m += weights_[j] * x[j];
  return m;
}

double SvmClassifier::proba_impl(std::span<const double> x) const {
  double m = bias_;
  for (size_t j = 0; j < weights_.size(); ++j) m += weights_[j] * x[j];
  return sigmoid(platt_.a * m + platt_.b);
}

nlohmann::json SvmClassifier::params_json() const {
  return {{"weights", weights_},
          {"bias", bias_},
          {"platt_a", platt_.a},
          {"platt_b", platt_.b}};
}

std::unique_ptr<Classifier> train_svm(const SvmParams& params, const DesignMatrix& X,
                                      const std::vector<int>& y, uint64_t seed) {
  std::vector<size_t> all(X.rows);
  std::iota(all.begin(), all.end(), size_t{0});
  const LinearFit final_fit = pegasos_fit(X, y, all, params.cost_c);

  size_t pos = 0;
  for (int yi : y) pos += (yi == 1);
  const size_t neg = y.size() - pos;

  std::vector<double> margins;
  std::vector<int> margin_labels;
  margins.reserve(X.rows);
  margin_labels.reserve(X.rows);
  if (pos >= 3 && neg >= 3) {
    // calibrate on out-of-fold margins so the sigmoid never sees
    // margins produced by a model fit on the same rows
    const auto folds = kfold_indices(X.rows, 3, y, derive_seed(seed, "platt"));
    for (const auto& holdout : folds) {
      std::vector<uint8_t> held(X.rows, 0);
      for (size_t r : holdout) held[r] = 1;
      std::vector<size_t> rest;
      rest.reserve(X.rows - holdout.size());
      for (size_t r = 0; r < X.rows; ++r)
        if (!held[r]) rest.push_back(r);
      const LinearFit fold_fit = pegasos_fit(X, y, rest, params.cost_c);
      for (size_t r : holdout) {
        margins.push_back(margin_of(fold_fit, X.row(r)));
        margin_labels.push_back(y[r]);
      }
    }
  } else {
    // too few samples to hold any out
    for (size_t r = 0; r < X.rows; ++r) {
      margins.push_back(margin_of(final_fit, X.row(r)));
      margin_labels.push_back(y[r]);
    }
  }
  const PlattScaling platt = fit_platt_calibrator(margins, margin_labels);
  return std::make_unique<SvmClassifier>(final_fit.w, final_fit.b, platt);
}

std::unique_ptr<Classifier> svm_from_json(const nlohmann::json& j) {
  PlattScaling platt;
  platt.a = j.at("platt_a").get<double>();
  platt.b = j.at("platt_b").get<double>();
  return std::make_unique<SvmClassifier>(j.at("weights").get<std::vector<double>>(),
                                         j.at("bias").get<double>(), platt);
}

}  // namespace diab
