#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace ertf {

/// SplitMix64 finalizer; used both for seeding and for stream splitting.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream key for replica `index` of a run seeded with `seed`.
///
/// Splitting rule: key = mix64(mix64(seed) ^ mix64(index + 1)). Every
/// stochastic output of a run is a function of (seed, index) only, so results
/// do not depend on the number of worker threads.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) ^ mix64(index + 1));
}

/// xoshiro256** generator (period 2^256 - 1), state filled from a SplitMix64
/// sequence. Satisfies UniformRandomBitGenerator.
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t key = 0) noexcept { reseed(key); }

    /// Generator for replica `index` of the run seeded with `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) noexcept
    {
        return Rng(stream_key(seed, index));
    }

    void reseed(std::uint64_t key) noexcept
    {
        std::uint64_t x = key;
        for (auto& word : s_)
        {
            x += 0x9e3779b97f4a7c15ULL;
            word = mix64(x);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
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

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe to take the logarithm of.
    double uniform_pos() noexcept { return 1.0 - uniform(); }

    /// Exp(rate) draw by inversion. rate must be positive.
    double exponential(double rate) noexcept { return -std::log(uniform_pos()) / rate; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

}  // namespace ertf
