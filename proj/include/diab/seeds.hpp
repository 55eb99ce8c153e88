#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace diab {

// Child seed for a named pipeline stage. Hashing (master, stage, index)
// keeps the stages' random streams independent of each other.
uint64_t derive_seed(uint64_t master, std::string_view stage, uint64_t index = 0);

// Seeded generator with explicitly implemented distributions so that the
// same seed produces the same stream on every platform and compiler.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer in [lo, hi], inclusive.
  uint64_t uniform_int(uint64_t lo, uint64_t hi);

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller; pairs are generated and the spare cached.
  double normal(double mean = 0.0, double stddev = 1.0);

  // Exponential with the given mean.
  double exponential(double mean);

  // Draw an index from unnormalized weights.
  size_t weighted_index(const std::vector<double>& weights);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.empty()) return;
    for (size_t i = v.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(uniform_int(0, i));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace diab
