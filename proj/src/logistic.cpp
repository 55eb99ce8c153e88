#include "diab/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "diab/errors.hpp"

namespace diab {

namespace {

constexpr double kGradTol = 1e-6;
constexpr size_t kMaxIters = 10000;
constexpr double kArmijoC = 1e-4;
constexpr double kMinStep = 1e-16;

// log(1 + exp(z)) without overflow
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double max_abs(const std::vector<double>& g, double gb) {
  double m = std::abs(gb);
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

double logistic_loss_and_gradient(const DesignMatrix& X, const std::vector<int>& y,
                                  const std::vector<double>& weights, double intercept,
                                  double l2_strength, std::vector<double>& grad_w,
                                  double& grad_b) {
  if (X.rows != y.size()) throw ShapeError("label count does not match design matrix rows");
  if (weights.size() != X.cols) throw ShapeError("weight count does not match design matrix");
  const double n = static_cast<double>(X.rows);
  grad_w.assign(X.cols, 0.0);
  grad_b = 0.0;
  double loss = 0.0;
  for (size_t i = 0; i < X.rows; ++i) {
    const auto xi = X.row(i);
    double z = intercept;
    for (size_t j = 0; j < X.cols; ++j) z += weights[j] * xi[j];
    // per-sample loss: softplus(z) - y*z
    loss += softplus(z) - (y[i] == 1 ? z : 0.0);
    const double resid = sigmoid(z) - static_cast<double>(y[i]);
    for (size_t j = 0; j < X.cols; ++j) grad_w[j] += resid * xi[j];
    grad_b += resid;
  }
  loss /= n;
  grad_b /= n;
  double penalty = 0.0;
  for (size_t j = 0; j < X.cols; ++j) {
    grad_w[j] = grad_w[j] / n + (l2_strength / n) * weights[j];
    penalty += weights[j] * weights[j];
  }
  loss += (l2_strength / (2.0 * n)) * penalty;
  return loss;
}

LogisticClassifier::LogisticClassifier(std::vector<double> weights, double intercept,
                                       size_t iterations, bool converged)
    : weights_(std::move(weights)), intercept_(intercept), iterations_(iterations),
      converged_(converged) {
  width_ = weights_.size();
}

double LogisticClassifier::proba_impl(std::span<const double> x) const {
  double z = intercept_;
  for (size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
  return sigmoid(z);
}

nlohmann::json LogisticClassifier::params_json() const {
  return {{"weights", weights_},
          {"intercept", intercept_},
          {"iterations", iterations_},
          {"converged", converged_}};
}

std::unique_ptr<Classifier> train_logistic(const LogisticParams& params, const DesignMatrix& X,
                                           const std::vector<int>& y) {
  std::vector<double> w(X.cols, 0.0);
  double b = 0.0;
  std::vector<double> grad_w;
  double grad_b = 0.0;
  double loss = logistic_loss_and_gradient(X, y, w, b, params.l2_strength, grad_w, grad_b);
  size_t iter = 0;
  bool converged = false;
  std::vector<double> w_next(X.cols);
  std::vector<double> grad_next;
  double gb_next = 0.0;
  for (; iter < kMaxIters; ++iter) {
    if (max_abs(grad_w, grad_b) < kGradTol) {
      converged = true;
      break;
    }
    double gnorm2 = grad_b * grad_b;
    for (double g : grad_w) gnorm2 += g * g;
    double step = 1.0;
    double loss_next = loss;
    double b_next = b;
    while (true) {
      for (size_t j = 0; j < X.cols; ++j) w_next[j] = w[j] - step * grad_w[j];
      b_next = b - step * grad_b;
      loss_next = logistic_loss_and_gradient(X, y, w_next, b_next, params.l2_strength,
                                             grad_next, gb_next);
      if (loss_next <= loss - kArmijoC * step * gnorm2) break;
      step *= 0.5;
      if (step < kMinStep) break;
    }
    if (step < kMinStep) break;  // no descent possible at machine precision
    w.swap(w_next);
    b = b_next;
    loss = loss_next;
    grad_w.swap(grad_next);
    grad_b = gb_next;
  }
  return std::make_unique<LogisticClassifier>(std::move(w), b, iter, converged);
}

std::unique_ptr<Classifier> logistic_from_json(const nlohmann::json& j) {
  return std::make_unique<LogisticClassifier>(
      j.at("weights").get<std::vector<double>>(), j.at("intercept").get<double>(),
      j.at("iterations").get<size_t>(), j.at("converged").get<bool>());
}

}  // namespace diab
