#pragma once

#include <cstdint>

namespace motprobe {

// SplitMix64 stream. The whole state is the 64-bit counter, so a generator
// is a plain value: copy it to fork, compare it to check reproducibility.
//
//   next():    state += 0x9E3779B97F4A7C15; return mix64(state)
//   mix64(z):  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//              z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//              return z ^ (z >> 31)
//   uniform(): (next() >> 11) * 2^-53, in [0, 1)
//   normal():  Box-Muller cosine branch, u1 = 1 - uniform(), u2 = uniform(),
//              sqrt(-2 ln u1) * cos(2 pi u2); one value per call
//   split(k):  Rng(mix64(state ^ mix64(k + 0x9E3779B97F4A7C15)))
class Rng {
public:
    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

    explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t next() noexcept {
        state_ += golden_gamma;
        return mix64(state_);
    }

    double uniform() noexcept;
    double normal() noexcept;

    Rng split(std::uint64_t stream) const noexcept {
        return Rng(mix64(state_ ^ mix64(stream + golden_gamma)));
    }

    std::uint64_t state() const noexcept { return state_; }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t state_;
};

// Poisson deviate.
//   mean == 0:  0, no draw consumed
//   mean < 30:  inversion by sequential search on one uniform u; returns the
//               smallest k with u < P(X <= k), pmf built by p_k = p_{k-1} mean / k
//   mean >= 30: floor(mean + sqrt(mean) * normal() + 0.5), clamped at 0
std::uint64_t poisson(double mean, Rng& rng);

}  // namespace motprobe
