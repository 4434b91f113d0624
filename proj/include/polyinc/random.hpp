#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace polyinc {

/// Seeded generator with platform-independent derived draws.
///
/// std::uniform_int_distribution is implementation-defined, so bounded draws
/// are done here by rejection on the raw mt19937_64 stream.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// k distinct values of [0, n) by partial Fisher-Yates, returned sorted.
  std::vector<std::uint64_t> sample(std::uint64_t n, std::uint64_t k);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent seed for a sub-stream (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace polyinc
