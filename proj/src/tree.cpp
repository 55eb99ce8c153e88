#include "diab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diab/errors.hpp"

namespace diab {

double Tree::predict(std::span<const double> x) const {
  if (nodes.empty()) throw ShapeError("cannot predict with an empty tree");
  int i = 0;
  while (nodes[i].feature >= 0) {
    const TreeNode& node = nodes[i];
    if (static_cast<size_t>(node.feature) >= x.size())
      throw ShapeError("tree references a column beyond the feature vector");
    i = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes[i].value;
}

size_t Tree::n_leaves() const {
  size_t c = 0;
  for (const TreeNode& n : nodes) c += (n.feature < 0);
  return c;
}

nlohmann::json Tree::to_json() const {
  nlohmann::json feature = nlohmann::json::array();
  nlohmann::json threshold = nlohmann::json::array();
  nlohmann::json left = nlohmann::json::array();
  nlohmann::json right = nlohmann::json::array();
  nlohmann::json value = nlohmann::json::array();
  for (const TreeNode& n : nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"feature", std::move(feature)},
          {"threshold", std::move(threshold)},
          {"left", std::move(left)},
          {"right", std::move(right)},
          {"value", std::move(value)}};
}

Tree Tree::from_json(const nlohmann::json& j) {
  Tree t;
  const auto& feature = j.at("feature");
  const auto& threshold = j.at("threshold");
  const auto& left = j.at("left");
  const auto& right = j.at("right");
  const auto& value = j.at("value");
  const size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n)
    throw ArtifactError("tree arrays have inconsistent lengths");
  t.nodes.resize(n);
  for (size_t i = 0; i < n; ++i) {
    t.nodes[i].feature = feature[i].get<int>();
    t.nodes[i].threshold = threshold[i].get<double>();
    t.nodes[i].left = left[i].get<int>();
    t.nodes[i].right = right[i].get<int>();
    t.nodes[i].value = value[i].get<double>();
  }
  return t;
}

namespace {

constexpr double kMinGain = 1e-12;
constexpr double kHessEps = 1e-12;
constexpr double kLeafClamp = 50.0;

// Sufficient statistics for both split criteria. Gini mode stores the
// label in `s` (h/s2 stay zero); regression mode stores residual sums
// plus hessians for the Newton leaf.
struct Stats {
  double n = 0.0;
  double s = 0.0;
  double s2 = 0.0;
  double h = 0.0;

  void add(double target, double hess) {
    n += 1.0;
    s += target;
    s2 += target * target;
    h += hess;
  }
};

struct GiniCriterion {
  static double impurity(const Stats& st) {
    if (st.n <= 0.0) return 0.0;
    const double p = st.s / st.n;
    return 2.0 * p * (1.0 - p);
  }
  static double leaf_value(const Stats& st) { return st.n > 0.0 ? st.s / st.n : 0.0; }
};

struct NewtonCriterion {
  static double impurity(const Stats& st) {
    if (st.n <= 0.0) return 0.0;
    const double mean = st.s / st.n;
    const double var = st.s2 / st.n - mean * mean;
    return var > 0.0 ? var : 0.0;
  }
  static double leaf_value(const Stats& st) {
    const double v = st.s / (st.h + kHessEps);
    return std::clamp(v, -kLeafClamp, kLeafClamp);
  }
};

template <class Criterion>
class Grower {
 public:
  Grower(const DesignMatrix& X, const std::vector<double>& target,
         const std::vector<double>& hess, const TreeGrowth& opt, Rng& rng,
         std::vector<double>* importances)
      : X_(X), target_(target), hess_(hess), opt_(opt), rng_(rng), importances_(importances) {}

  Tree grow(std::span<const size_t> rows) {
    if (rows.empty()) throw TrainingError("cannot grow a tree on an empty sample");
    for (size_t r : rows)
      if (r >= X_.rows) throw ArgumentError("tree sample row out of range");
    n_root_ = static_cast<double>(rows.size());
    Tree tree;
    std::vector<size_t> work(rows.begin(), rows.end());
    build(tree, work, 0, static_cast<int>(work.size()), 0);
    return tree;
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
  };

  Stats stats_of(const std::vector<size_t>& rows, int lo, int hi) const {
    Stats st;
    for (int i = lo; i < hi; ++i) st.add(target_[rows[i]], hess_[rows[i]]);
    return st;
  }

  std::vector<size_t> candidate_columns() {
    std::vector<size_t> cols(X_.cols);
    std::iota(cols.begin(), cols.end(), size_t{0});
    const size_t m = opt_.features_per_split == 0
                         ? X_.cols
                         : std::min(opt_.features_per_split, X_.cols);
    if (m >= X_.cols) return cols;
    for (size_t i = 0; i < m; ++i) {
      const size_t j = i + static_cast<size_t>(
                               rng_.uniform_int(0, static_cast<uint64_t>(cols.size() - 1 - i)));
      std::swap(cols[i], cols[j]);
    }
    cols.resize(m);
    std::sort(cols.begin(), cols.end());
    return cols;
  }

  Split best_split(const std::vector<size_t>& rows, int lo, int hi, const Stats& parent) {
    Split best;
    const double parent_imp = Criterion::impurity(parent);
    if (parent_imp <= kMinGain) return best;
    const std::vector<size_t> cols = candidate_columns();
    std::vector<std::pair<double, size_t>> ordered;
    ordered.reserve(static_cast<size_t>(hi - lo));
    for (size_t col : cols) {
      ordered.clear();
      for (int i = lo; i < hi; ++i)
        ordered.emplace_back(X_.at(rows[i], col), rows[i]);
      std::sort(ordered.begin(), ordered.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      Stats left;
      for (size_t i = 0; i + 1 < ordered.size(); ++i) {
        left.add(target_[ordered[i].second], hess_[ordered[i].second]);
        if (ordered[i].first >= ordered[i + 1].first) continue;
        const double n_left = left.n;
        const double n_right = parent.n - n_left;
        if (n_left < static_cast<double>(opt_.min_leaf) ||
            n_right < static_cast<double>(opt_.min_leaf))
          continue;
        Stats right;
        right.n = n_right;
        right.s = parent.s - left.s;
        right.s2 = parent.s2 - left.s2;
        right.h = parent.h - left.h;
        const double gain = parent_imp - (n_left / parent.n) * Criterion::impurity(left) -
                            (n_right / parent.n) * Criterion::impurity(right);
        if (gain > kMinGain && gain > best.gain) {
          best.feature = static_cast<int>(col);
          best.threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  int build(Tree& tree, std::vector<size_t>& rows, int lo, int hi, int depth) {
    const Stats parent = stats_of(rows, lo, hi);
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const bool depth_ok = opt_.max_depth == 0 || depth < opt_.max_depth;
    Split split;
    if (depth_ok && parent.n >= 2.0 * static_cast<double>(opt_.min_leaf))
      split = best_split(rows, lo, hi, parent);
    if (split.feature < 0) {
      tree.nodes[index].value = Criterion::leaf_value(parent);
      return index;
    }
    if (importances_)
      (*importances_)[static_cast<size_t>(split.feature)] += (parent.n / n_root_) * split.gain;
    const auto col = static_cast<size_t>(split.feature);
    const auto mid_it = std::partition(
        rows.begin() + lo, rows.begin() + hi,
        [&](size_t r) { return X_.at(r, col) <= split.threshold; });
    const int mid = static_cast<int>(mid_it - rows.begin());
    tree.nodes[index].feature = split.feature;
    tree.nodes[index].threshold = split.threshold;
    tree.nodes[index].left = build(tree, rows, lo, mid, depth + 1);
    tree.nodes[index].right = build(tree, rows, mid, hi, depth + 1);
    return index;
  }

  const DesignMatrix& X_;
  const std::vector<double>& target_;
  const std::vector<double>& hess_;
  TreeGrowth opt_;
  Rng& rng_;
  std::vector<double>* importances_;
  double n_root_ = 0.0;
};

void check_importances(const std::vector<double>* importances, size_t cols) {
  if (importances && importances->size() != cols)
    throw ShapeError("importance vector width does not match design matrix");
}

}  // namespace

Tree grow_classification_tree(const DesignMatrix& X, const std::vector<int>& y,
                              std::span<const size_t> rows, const TreeGrowth& opt, Rng& rng,
                              std::vector<double>* importances) {
  if (X.rows != y.size()) throw ShapeError("label count does not match design matrix rows");
  check_importances(importances, X.cols);
  std::vector<double> target(y.size());
  for (size_t i = 0; i < y.size(); ++i) target[i] = static_cast<double>(y[i]);
  const std::vector<double> hess(y.size(), 0.0);
  Grower<GiniCriterion> grower(X, target, hess, opt, rng, importances);
  return grower.grow(rows);
}

Tree grow_regression_tree(const DesignMatrix& X, const std::vector<double>& grad,
                          const std::vector<double>& hess, std::span<const size_t> rows,
                          const TreeGrowth& opt, Rng& rng, std::vector<double>* importances) {
  if (X.rows != grad.size() || X.rows != hess.size())
    throw ShapeError("residual count does not match design matrix rows");
  check_importances(importances, X.cols);
  Grower<NewtonCriterion> grower(X, grad, hess, opt, rng, importances);
  return grower.grow(rows);
}

}  // namespace diab
