#pragma once
// Deterministic random streams for reproducible simulation batches.
//
// Stream derivation: stream k of master seed s is an mt19937_64 engine seeded
// with mix64(mix64(s ^ GOLDEN * (k + 1))), where mix64 is the splitmix64
// finalizer. A (seed, index) pair therefore pins the entire stream, so batches
// can be split across threads in any order and still reproduce the serial
// result run for run.

#include <cstdint>
#include <random>

namespace matchsim {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (public domain constants)
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(mix64(mix64(master_seed ^ (kGolden * (stream_index + 1)))));
}

// Uniform double in [0, 1) with 53 bits. The standard distributions are
// implementation-defined, so all sampling below goes through this.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Uniform index in [0, m) via 128-bit multiply-shift; bias O(m / 2^64).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t m) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * m) >> 64);
}

// Box-Muller pair with a cached spare. Draw count per output is fixed (two
// uniforms per pair), which keeps parallel streams reproducible.
class NormalSampler {
  public:
    double operator()(Rng& rng);

  private:
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace matchsim
