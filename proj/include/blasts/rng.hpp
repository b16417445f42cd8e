#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace blasts {

// Seed derivation for named, independent random streams. Each (label, seed)
// pair maps to its own engine seed, so an episode's draws never depend on
// which other episodes run or in what order.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_stream_seed(std::uint64_t root, std::string_view label, std::uint64_t seed) {
    std::uint64_t s = splitmix64(root);
    s = splitmix64(s ^ hash_label(label));
    s = splitmix64(s ^ seed);
    return s;
}

inline std::mt19937_64 make_stream(std::uint64_t root, std::string_view label, std::uint64_t seed) {
    return std::mt19937_64(derive_stream_seed(root, label, seed));
}

}  // namespace blasts
