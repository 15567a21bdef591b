#pragma once

#include <cstdint>
#include <random>

namespace qlocality {

// Deterministic generator shared by every seeded operation.
//
//   engine   std::mt19937_64 seeded with the 64-bit seed (sequence fixed by the standard)
//   uniform  (x >> 11) * 2^-53, x the next engine output; range [0, 1)
//   normal   Box-Muller cosine branch: sqrt(-2 ln(1 - u1)) * cos(2 pi u2), two uniforms per
//            draw, nothing cached
//
// The std:: distributions are avoided on purpose: their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
};

// SplitMix64 finaliser applied to seed + (stream + 1) * 0x9E3779B97F4A7C15. Used to give each
// sampling chunk or test case its own independent stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::uint64_t kDefaultSeed = 20050101;

}  // namespace qlocality
