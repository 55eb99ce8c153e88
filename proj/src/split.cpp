#include "diab/split.hpp"

#include <algorithm>
#include <cmath>

#include "diab/errors.hpp"
#include "diab/seeds.hpp"

namespace diab {

std::pair<Cohort, Cohort> split_train_test(const Cohort& cohort, double test_fraction,
                                           uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ArgumentError("test_fraction must be in (0, 1)");
  if (cohort.n() == 0) throw ArgumentError("cannot split an empty cohort");

  std::vector<size_t> class_rows[2];
  for (size_t i = 0; i < cohort.n(); ++i) class_rows[cohort.labels[i] == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (class_rows[c].size() < 2)
      throw StratificationError("class " + std::to_string(c) + " has fewer than 2 members (" +
                                std::to_string(class_rows[c].size()) + ")");
  }

  const size_t n = cohort.n();
  const auto test_total = static_cast<size_t>(std::llround(static_cast<double>(n) * test_fraction));

  // Largest-remainder allocation of the test quota across the two classes.
  size_t take[2];
  double quota[2];
  size_t base_sum = 0;
  for (int c = 0; c < 2; ++c) {
    quota[c] = static_cast<double>(class_rows[c].size()) * static_cast<double>(test_total) /
               static_cast<double>(n);
    take[c] = static_cast<size_t>(std::floor(quota[c]));
    base_sum += take[c];
  }
  size_t leftover = test_total - base_sum;
  const double rem0 = quota[0] - std::floor(quota[0]);
  const double rem1 = quota[1] - std::floor(quota[1]);
  int order[2] = {0, 1};
  if (rem1 > rem0) std::swap(order[0], order[1]);
  for (int i = 0; i < 2 && leftover > 0; ++i, --leftover) take[order[i]] += 1;
  for (int c = 0; c < 2; ++c) take[c] = std::min(take[c], class_rows[c].size());

  Rng rng(derive_seed(seed, "split"));
  std::vector<uint8_t> is_test(n, 0);
  for (int c = 0; c < 2; ++c) {
    auto rows = class_rows[c];
    rng.shuffle(rows);
    for (size_t i = 0; i < take[c]; ++i) is_test[rows[i]] = 1;
  }

  std::vector<size_t> train_rows, test_rows;
  for (size_t i = 0; i < n; ++i) (is_test[i] ? test_rows : train_rows).push_back(i);
  return {cohort.subset(train_rows), cohort.subset(test_rows)};
}

}  // namespace diab
