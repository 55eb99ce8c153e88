#pragma once

#include <cstdint>
#include <vector>

namespace diab {

// Stratified k-fold split: returns k disjoint validation index sets
// covering 0..n-1, sizes differing by at most one, each sorted
// ascending. Deterministic per seed.
std::vector<std::vector<size_t>> kfold_indices(size_t n, int k, const std::vector<int>& labels,
                                               uint64_t seed);

}  // namespace diab
