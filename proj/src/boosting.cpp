#include "diab/boosting.hpp"

#include <cmath>
#include <numeric>

#include "diab/errors.hpp"
#include "diab/seeds.hpp"

namespace diab {

BoostingClassifier::BoostingClassifier(double init_score, std::vector<Tree> trees,
                                       std::vector<double> importances,
                                       std::vector<double> staged_losses, size_t width)
    : init_score_(init_score), trees_(std::move(trees)), importances_(std::move(importances)),
      staged_losses_(std::move(staged_losses)) {
  width_ = width;
}

double BoostingClassifier::decision_score(std::span<const double> x) const {
  double f = init_score_;
  for (const Tree& t : trees_) f += t.predict(x);
  return f;
}

double BoostingClassifier::proba_impl(std::span<const double> x) const {
  return sigmoid(decision_score(x));
}

nlohmann::json BoostingClassifier::params_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) trees.push_back(t.to_json());
  return {{"init_score", init_score_},
          {"trees", std::move(trees)},
          {"importances", importances_},
          {"staged_losses", staged_losses_},
          {"width", width_}};
}

namespace {

double mean_log_loss(const std::vector<double>& score, const std::vector<int>& y) {
  double loss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double z = score[i];
    // softplus(z) - y*z, kept stable for large |z|
    const double sp = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss += sp - (y[i] == 1 ? z : 0.0);
  }
  return loss / static_cast<double>(y.size());
}

}  // namespace

std::unique_ptr<Classifier> train_boosting(const BoostParams& params, const DesignMatrix& X,
                                           const std::vector<int>& y) {
  const size_t n = X.rows;
  size_t pos = 0;
  for (int yi : y) pos += (yi == 1);
  const double prevalence = static_cast<double>(pos) / static_cast<double>(n);
  const double init = std::log(prevalence / (1.0 - prevalence));

  std::vector<double> score(n, init);
  std::vector<double> grad(n), hess(n);
  std::vector<size_t> rows(n);
  std::iota(rows.begin(), rows.end(), size_t{0});
  TreeGrowth opt;
  opt.max_depth = params.max_depth;
  opt.features_per_split = 0;  // boosting trees scan every column
  Rng rng(0);                  // unused: no column subsampling

  std::vector<Tree> trees;
  trees.reserve(static_cast<size_t>(params.n_stages));
  std::vector<double> importances(X.cols, 0.0);
  std::vector<double> staged_losses;
  staged_losses.reserve(static_cast<size_t>(params.n_stages));

  for (int stage = 0; stage < params.n_stages; ++stage) {
    for (size_t i = 0; i < n; ++i) {
      const double p = sigmoid(score[i]);
      grad[i] = static_cast<double>(y[i]) - p;
      hess[i] = p * (1.0 - p);
    }
    Tree tree = grow_regression_tree(X, grad, hess, rows, opt, rng, &importances);
    for (TreeNode& node : tree.nodes)
      if (node.feature < 0) node.value *= params.learning_rate;
    for (size_t i = 0; i < n; ++i) score[i] += tree.predict(X.row(i));
    staged_losses.push_back(mean_log_loss(score, y));
    trees.push_back(std::move(tree));
  }
  for (double& v : importances) v /= static_cast<double>(params.n_stages);
  return std::make_unique<BoostingClassifier>(init, std::move(trees), std::move(importances),
                                              std::move(staged_losses), X.cols);
}

std::unique_ptr<Classifier> boosting_from_json(const nlohmann::json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
  return std::make_unique<BoostingClassifier>(
      j.at("init_score").get<double>(), std::move(trees),
      j.at("importances").get<std::vector<double>>(),
      j.at("staged_losses").get<std::vector<double>>(), j.at("width").get<size_t>());
}

}  // namespace diab
