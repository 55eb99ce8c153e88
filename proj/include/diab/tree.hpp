#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "diab/encode.hpp"
#include "diab/seeds.hpp"

namespace diab {

// Binary decision tree stored as a flat node array (index 0 = root).
// Internal nodes route x[feature] <= threshold to `left`, otherwise to
// `right`; leaves carry `value` and have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }
  double predict(std::span<const double> x) const;
  size_t n_leaves() const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& j);
};

struct TreeGrowth {
  int max_depth = 0;             // 0 = unlimited
  size_t min_leaf = 1;           // smallest sample count allowed in a leaf
  size_t features_per_split = 0; // 0 = consider every column
};

// Gini-impurity tree over 0/1 labels; leaves hold the positive-class
// fraction. `rows` selects the training sample. When `importances` is
// given, every split adds (n_node / n_root) * gain to its column.
Tree grow_classification_tree(const DesignMatrix& X, const std::vector<int>& y,
                              std::span<const size_t> rows, const TreeGrowth& opt, Rng& rng,
                              std::vector<double>* importances = nullptr);

// Squared-error tree over residuals with Newton leaf values
// sum(grad) / (sum(hess) + eps), clamped to +/-50.
Tree grow_regression_tree(const DesignMatrix& X, const std::vector<double>& grad,
                          const std::vector<double>& hess, std::span<const size_t> rows,
                          const TreeGrowth& opt, Rng& rng,
                          std::vector<double>* importances = nullptr);

}  // namespace diab
