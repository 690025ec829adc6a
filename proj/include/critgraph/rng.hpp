#pragma once

#include <cstdint>

namespace critgraph {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: every (trial, vertex, stream) triple maps to an
/// independent 64-bit word, so results do not depend on how trials are
/// split across workers.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(splitmix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

    std::uint64_t word(std::uint64_t trial, std::uint64_t vertex, std::uint64_t stream) const
    {
        return splitmix64(key_ ^ splitmix64(trial * 0x100000001B3ULL + (vertex << 2) + stream));
    }

    /// Uniform in [0, n) by multiply-shift.
    std::uint32_t below(std::uint64_t trial, std::uint64_t vertex, std::uint64_t stream, std::uint32_t n) const
    {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(word(trial, vertex, stream)) * n) >> 64);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform(std::uint64_t trial, std::uint64_t vertex, std::uint64_t stream) const
    {
        return static_cast<double>(word(trial, vertex, stream) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

}  // namespace critgraph
