#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace namelex {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness
/// is needed so that outputs are byte-identical across platforms; the
/// standard <random> distributions are implementation-defined and are
/// deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    // multiply-shift bound; bias is negligible for the n used here
    // (grammar sizes, candidate counts), and it is branch-free.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a 64-bit hash; used for cache checksums and per-instance seeds.
inline std::uint64_t fnv1a(std::string_view s,
                           std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Stable per-instance seed: mixes a run seed with an instance key.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view key) {
  Rng r(seed ^ fnv1a(key));
  return r.next();
}

}  // namespace namelex
