#include "polyinc/random.hpp"

#include <algorithm>
#include <unordered_map>

#include "polyinc/errors.hpp"

namespace polyinc {

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw Error("below(0) has no valid outcome");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

std::vector<std::uint64_t> SeededRng::sample(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw Error("cannot sample more elements than the population holds");
  // Sparse Fisher-Yates: only displaced slots are stored.
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto at = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t j = i + below(n - i);
    const std::uint64_t vi = at(i), vj = at(j);
    moved[j] = vi;
    out.push_back(vj);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace polyinc
