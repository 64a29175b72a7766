// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace appgnn {

/// splitmix64 finalizer, used for seed derivation.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Stable sub-seed for a named pipeline stage. Every stage derives its own
/// stream from the run seed, so adding a stage never perturbs another
/// stage's randomness.
inline uint64_t derive_seed(uint64_t base, std::string_view label, uint64_t index = 0) {
  uint64_t h = 1469598103934665603ull; // FNV-1a over the label
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return mix64(base ^ mix64(h ^ mix64(index)));
}

/// mt19937_64 with hand-rolled sampling helpers. std::uniform_int_distribution
/// is implementation-defined, so sampling is done by hand to keep outputs
/// stable across toolchains.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t u64() { return eng_(); }

  /// Unbiased integer in [0, n). n must be nonzero.
  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = u64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  /// k distinct indices drawn from [0, n), in ascending order.
  std::vector<int> choose_distinct(int n, int k) {
    std::vector<int> pool(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
      const auto j = i + static_cast<int>(below(static_cast<uint64_t>(n - i)));
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

private:
  std::mt19937_64 eng_;
};

} // namespace appgnn
