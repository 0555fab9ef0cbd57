#pragma once

#include <cstdint>
#include <random>

namespace mrrt {

/// Deterministic PRNG. std::mt19937_64 is bit-specified by the standard but
/// the std distributions are not, so the real-valued draws are done here.
class Rng
{
public:
    explicit Rng(std::uint64_t seed)
        : engine_(seed)
    {
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi].
    double uniform(double lo, double hi)
    {
        double v = lo + (hi - lo) * uniform01();
        return v > hi ? hi : v;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used to derive independent seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0)
{
    return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

} // namespace mrrt
