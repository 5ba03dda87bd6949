#pragma once

#include <cstdint>

namespace freechoice {

/// xorshift64* (Vigna 2016): shifts 12, 25, 27 and output multiplier
/// 0x2545F4914F6CDD1D. State 0 is a fixed point, which is why seed 0 means
/// "no randomness" wherever a seed is accepted.
class Xorshift64Star {
public:
    static constexpr std::uint64_t multiplier = 0x2545F4914F6CDD1DULL;

    explicit Xorshift64Star(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept
    {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * multiplier;
    }

    /// Value in [0, bound); plain modulo reduction. bound must be non-zero.
    std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// splitmix64 finalizer; turns small or zero user seeds into well-mixed,
/// non-zero generator states.
constexpr std::uint64_t mix_seed(std::uint64_t seed) noexcept
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z == 0 ? 1 : z;
}

} // namespace freechoice
