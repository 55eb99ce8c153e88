#include "diab/folds.hpp"

#include <algorithm>

#include "diab/errors.hpp"
#include "diab/seeds.hpp"

namespace diab {

std::vector<std::vector<size_t>> kfold_indices(size_t n, int k, const std::vector<int>& labels,
                                               uint64_t seed) {
  if (k < 2) throw ArgumentError("k-fold requires k >= 2");
  if (labels.size() != n) throw ArgumentError("label count does not match n");
  std::vector<size_t> by_class[2];
  for (size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ArgumentError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < static_cast<size_t>(k))
      throw StratificationError("class " + std::to_string(c) + " has " +
                                std::to_string(by_class[c].size()) +
                                " members, fewer than k=" + std::to_string(k));
  }

  Rng rng(derive_seed(seed, "folds"));
  std::vector<std::vector<size_t>> folds(static_cast<size_t>(k));
  std::vector<size_t> sizes(static_cast<size_t>(k), 0);
  for (int c = 0; c < 2; ++c) {
    std::vector<size_t>& members = by_class[c];
    rng.shuffle(members);
    const size_t base = members.size() / static_cast<size_t>(k);
    size_t extras = members.size() % static_cast<size_t>(k);
    // how many this class contributes to each fold
    std::vector<size_t> take(static_cast<size_t>(k), base);
    std::vector<size_t> planned = sizes;
    for (size_t& s : planned) s += base;
    while (extras > 0) {
      size_t best = 0;
      for (size_t f = 1; f < planned.size(); ++f)
        if (planned[f] < planned[best]) best = f;
      ++take[best];
      ++planned[best];
      --extras;
    }
    size_t next = 0;
    for (size_t f = 0; f < folds.size(); ++f) {
      for (size_t t = 0; t < take[f]; ++t) folds[f].push_back(members[next++]);
      sizes[f] += take[f];
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

}  // namespace diab
