#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace roomforge {

// 64-bit FNV-1a. Used for substream derivation and content hashing so that
// results do not depend on std::hash (which varies across standard libraries).
inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic generator (xoshiro256**), seeded via splitmix64. All draws go
// through the helpers below instead of <random> distributions, whose output is
// implementation-defined; this keeps generated artifacts byte-identical
// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). Debiased by rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Derive an independent substream keyed by a tag. Streams forked with
  // distinct tags never share draws, so consuming one does not perturb the
  // others (per-object placement streams rely on this).
  Rng fork(std::string_view tag) const {
    return Rng(fnv1a(tag, s_[0] ^ rotl(s_[3], 13)));
  }

  Rng fork(std::uint64_t n) const {
    std::uint64_t mix = s_[0] ^ rotl(s_[3], 13) ^ (n * 0x9e3779b97f4a7c15ull);
    return Rng(splitmix64(mix));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace roomforge
