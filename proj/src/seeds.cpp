#include "diab/seeds.hpp"

#include <cmath>
#include <numbers>

#include "diab/errors.hpp"

namespace diab {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001b3ULL;

uint64_t fnv1a_byte(uint64_t h, uint8_t b) { return (h ^ b) * kFnvPrime; }

uint64_t fnv1a_u64(uint64_t h, uint64_t v) {
  for (int i = 0; i < 8; ++i) h = fnv1a_byte(h, static_cast<uint8_t>(v >> (8 * i)));
  return h;
}

// splitmix64 finalizer; spreads low-entropy FNV states.
uint64_t mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t derive_seed(uint64_t master, std::string_view stage, uint64_t index) {
  uint64_t h = kFnvOffset;
  h = fnv1a_u64(h, master);
  for (char c : stage) h = fnv1a_byte(h, static_cast<uint8_t>(c));
  h = fnv1a_u64(h, index);
  return mix(h);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Rng::uniform_int(uint64_t lo, uint64_t hi) {
  if (lo > hi) throw ArgumentError("uniform_int: lo > hi");
  const uint64_t span = hi - lo;
  if (span == UINT64_MAX) return next_u64();
  const uint64_t bound = span + 1;
  // rejection sampling keeps the draw unbiased
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + v % bound;
}

double Rng::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return mean + stddev * r * std::cos(theta);
}

double Rng::exponential(double mean) {
  double u = uniform01();
  while (u <= 0.0) u = uniform01();
  return -mean * std::log(u);
}

size_t Rng::weighted_index(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw ArgumentError("weighted_index: weights must sum to a positive value");
  double target = uniform01() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    target -= weights[i];
    if (target < 0.0) return i;
  }
  return weights.size() - 1;
}

}  // namespace diab
