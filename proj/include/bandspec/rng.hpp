#pragma once

#include <cstdint>

namespace bandspec {

// SplitMix64 finalizer. Used as a stateless hash so that every random quantity
// is a pure function of (seed, counter...).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(a ^ mix64(b + 0x632be59bd9b4e019ULL));
}

// Seed of the sample with the given index, derived from the master seed.
constexpr std::uint64_t sample_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return hash_combine(mix64(master), index);
}

// Sign of the unordered edge {u, v}; independent of the order of u and v.
constexpr int edge_sign(std::uint64_t seed, std::int64_t u, std::int64_t v) noexcept {
    const auto lo = static_cast<std::uint64_t>(u < v ? u : v);
    const auto hi = static_cast<std::uint64_t>(u < v ? v : u);
    const std::uint64_t h = hash_combine(hash_combine(mix64(seed), lo), hi);
    return (h >> 63) ? 1 : -1;
}

}  // namespace bandspec
