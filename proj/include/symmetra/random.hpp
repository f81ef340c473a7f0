#pragma once

#include <cstdint>

namespace symmetra {

/// SplitMix64: small, fast, and trivially splittable by seeding.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

/// Independent stream for (seed, index), e.g. one per retry attempt.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 mix(seed ^ (index * 0xd1b54a32d192ed03ULL));
    mix.next();
    return mix.next();
}

}  // namespace symmetra
