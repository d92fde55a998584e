#pragma once
// Deterministic randomness plumbing.
//
// The standard <random> distributions are implementation-defined, which would
// break the byte-identical reproducibility contract across compilers, so the
// distributions here are hand-rolled on top of mt19937_64. Seed derivation
// uses splitmix64 mixing so that every (run, purpose, generation, index)
// tuple owns an independent stream; nothing in the engine ever shares a
// sequential stream across units of parallel work.

#include <cstdint>
#include <random>

namespace ant {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Order-sensitive mix of an arbitrary tuple of integers into one seed.
inline uint64_t derive_seed(uint64_t base) { return splitmix64(base); }
template <typename... Rest>
uint64_t derive_seed(uint64_t base, uint64_t next, Rest... rest) {
  return derive_seed(splitmix64(base) ^ splitmix64(next ^ 0x6a09e667f3bcc909ull), rest...);
}

// Stream tags keep derived seeds for different purposes disjoint even when
// the numeric arguments collide.
namespace stream {
constexpr uint64_t kScenario = 0xA11CE;
constexpr uint64_t kBehavior = 0xB0B0;
constexpr uint64_t kInit = 0x1211;
constexpr uint64_t kEvolve = 0xE70;
constexpr uint64_t kSweep = 0x53EE9;
}  // namespace stream

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(splitmix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n), exactly unbiased (Lemire multiply-shift with rejection).
  uint64_t below(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi], both ends inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ant
