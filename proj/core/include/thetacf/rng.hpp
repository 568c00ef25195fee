#pragma once

#include <cstdint>

namespace thetacf {

// Deterministic 64-bit generator (splitmix64 core).  Used instead of the
// standard-library engines/distributions so that every sampled sequence is
// bit-identical across platforms, standard libraries, and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [lo, hi] via 128-bit multiply-shift (Lemire).  The
  // tiny modulo bias (< 2^-64 * range) is irrelevant for diagnostics and
  // keeps the draw count per call fixed at one, which matters for
  // reproducible per-task streams.
  std::int64_t uniformInt(std::int64_t lo, std::int64_t hi) {
    std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next());  // full range
    unsigned __int128 wide =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(range);
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Independent stream for task `index` under a master seed.  Mixing the
  // index through one splitmix64 round decorrelates neighbouring tasks.
  static Rng forTask(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
    return Rng(mix.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace thetacf
