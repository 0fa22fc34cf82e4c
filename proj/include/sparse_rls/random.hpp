#pragma once

#include <cstdint>
#include <random>

namespace sparse_rls {

// Portable random source. std::mt19937_64 has a fully specified output
// sequence, but the standard distributions do not, so uniform and Gaussian
// draws are done here by fixed formulas:
//   uniform01: top 53 bits of one engine output, scaled to [0, 1)
//   normal:    Box-Muller, both outputs used (cosine first), u1 taken from (0, 1]
//   index(n):  rejection sampling on 64-bit outputs (no modulo bias)
// Substreams: substream_seed(seed, a, b) mixes the master seed with two
// indices through splitmix64; the harness uses a = trial, b = 0 for the
// system draw and b = 1 for the sample stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal();

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

}  // namespace sparse_rls
