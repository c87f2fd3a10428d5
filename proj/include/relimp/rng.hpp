#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

namespace relimp {

// splitmix64 generator (Vigna). Pure 64-bit integer arithmetic, so streams are
// identical on every platform and independent of any standard-library details.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound), bound >= 1. Lemire's multiply-shift with rejection,
  // no modulo bias.
  std::uint64_t nextBelow(std::uint64_t bound) {
    using U128 = unsigned __int128;
    std::uint64_t x = next();
    U128 m = static_cast<U128>(x) * static_cast<U128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0ULL - bound) % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<U128>(x) * static_cast<U128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double nextUnit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace stream {
// Purpose tags keep streams for different uses disjoint even under equal keys.
inline constexpr std::uint64_t kSubsample = 0x5353414d504c4531ULL;
inline constexpr std::uint64_t kPermutation = 0x5045524d55544531ULL;
}  // namespace stream

// Derives an independent generator from a seed and a key tuple by folding each
// part through the splitmix64 mixer.
inline SplitMix64 streamFor(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  SplitMix64 mixer(seed);
  std::uint64_t h = mixer.next();
  for (std::uint64_t part : parts) {
    SplitMix64 fold(h ^ part);
    h = fold.next();
  }
  return SplitMix64(h);
}

// First k entries of a Fisher-Yates pass over [0, n), returned in ascending
// order. The result is a uniformly random k-subset; sorting canonicalizes it
// so downstream accumulation order never depends on the draw order.
inline std::vector<int> sampleWithoutReplacement(int n, int k, SplitMix64& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    const auto j = static_cast<int>(rng.nextBelow(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(i + j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffleInPlace(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.nextBelow(static_cast<std::uint64_t>(i)));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace relimp
