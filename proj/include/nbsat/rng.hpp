#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace nbsat {

// Seed for the deterministic generator shared by instance generators and
// weight initialization. The same seed produces the same stream on every
// platform.
struct RngSeed {
  std::uint64_t value = 0;
};

// SplitMix64. The algorithm is spelled out below so the stream can be
// reproduced from this file alone: the 64-bit state advances by the constant
// 0x9e3779b97f4a7c15 on every draw, and the output is the state passed
// through the 30/27/31 xor-shift-multiply finalizer. No library generator is
// involved, so the sequence is bit-for-bit identical everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(RngSeed seed) : state_(seed.value) {}
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). Plain modulo reduction: the bias is
  // negligible at the ranges used here and the mapping stays trivially
  // portable.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be positive");
    return next() % n;
  }

  // Uniform double in [0, 1), built from the top 53 bits of next().
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Geometric on {1, 2, ...}: the number of unit() trials up to and
  // including the first success. Mean 1/p.
  int geometric(double p) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("geometric: p must be in (0, 1]");
    int k = 1;
    while (unit() >= p) ++k;
    return k;
  }

  int uniform_int(int lo, int hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // k distinct values from {lo, ..., hi}: partial Fisher-Yates over the
  // increasing sequence, returning the first k slots in shuffle order.
  std::vector<int> sample_distinct(int lo, int hi, int k) {
    const int n = hi - lo + 1;
    if (lo > hi || k < 0 || k > n)
      throw std::invalid_argument("sample_distinct: bad range or k");
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), lo);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(k));
    return pool;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nbsat
