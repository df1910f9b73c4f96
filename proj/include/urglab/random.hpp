#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace urglab {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t tag_hash(std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
    for (char ch : tag) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Stream key for (master seed, module tag, trial index). Every stochastic
// routine draws from an engine seeded through this, so the order in which
// trials are scheduled cannot change their values.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ tag_hash(tag)) + splitmix64(index));
}

inline Rng make_rng(std::uint64_t master, std::string_view tag, std::uint64_t index = 0) {
    return Rng{derive_seed(master, tag, index)};
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace urglab
