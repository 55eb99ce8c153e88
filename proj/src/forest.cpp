#include "diab/forest.hpp"

#include <numeric>

#include "diab/errors.hpp"
#include "diab/parallel.hpp"
#include "diab/seeds.hpp"

namespace diab {

ForestClassifier::ForestClassifier(std::vector<Tree> trees, std::vector<double> importances,
                                   size_t width)
    : trees_(std::move(trees)), importances_(std::move(importances)) {
  if (trees_.empty()) throw TrainingError("forest requires at least one tree");
  width_ = width;
}

double ForestClassifier::proba_impl(std::span<const double> x) const {
  double sum = 0.0;
  for (const Tree& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

nlohmann::json ForestClassifier::params_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) trees.push_back(t.to_json());
  return {{"trees", std::move(trees)}, {"importances", importances_}, {"width", width_}};
}

std::unique_ptr<Classifier> train_forest(const ForestParams& params, const DesignMatrix& X,
                                         const std::vector<int>& y, uint64_t seed, int jobs) {
  const size_t n_trees = static_cast<size_t>(params.n_trees);
  TreeGrowth opt;
  opt.max_depth = params.max_depth;
  opt.features_per_split = feature_subset_count(params.features_per_split, X.cols);
  std::vector<size_t> rows(X.rows);
  std::iota(rows.begin(), rows.end(), size_t{0});

  std::vector<Tree> trees(n_trees);
  std::vector<std::vector<double>> gains(n_trees);
  parallel_for(n_trees, jobs, [&](size_t t) {
    Rng rng(derive_seed(seed, "tree", t));
    gains[t].assign(X.cols, 0.0);
    trees[t] = grow_classification_tree(X, y, rows, opt, rng, &gains[t]);
  });

  std::vector<double> importances(X.cols, 0.0);
  for (const auto& g : gains)
    for (size_t c = 0; c < X.cols; ++c) importances[c] += g[c];
  for (double& v : importances) v /= static_cast<double>(n_trees);
  return std::make_unique<ForestClassifier>(std::move(trees), std::move(importances), X.cols);
}

std::unique_ptr<Classifier> forest_from_json(const nlohmann::json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(Tree::from_json(t));
  return std::make_unique<ForestClassifier>(std::move(trees),
                                            j.at("importances").get<std::vector<double>>(),
                                            j.at("width").get<size_t>());
}

}  // namespace diab
