#pragma once

#include <cstdint>
#include <utility>

#include "diab/cohort.hpp"

namespace diab {

// Stratified train/test split. The test partition gets round(n * fraction)
// samples, allocated across classes by largest remainder so each
// partition's prevalence stays within one sample count of the whole
// cohort's. Deterministic for a fixed seed.
std::pair<Cohort, Cohort> split_train_test(const Cohort& cohort, double test_fraction,
                                           uint64_t seed);

}  // namespace diab
