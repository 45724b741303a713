#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace iab {

/** Random stream used by every sampling routine. */
using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a path of integer labels.
/// Streams built from distinct paths are statistically independent, which
/// lets trials, entities and purposes draw without sharing state.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = mix64(seed);
    for (std::uint64_t label : path) {
        s = mix64(s ^ mix64(label + 0x632be59bd9b4e019ULL));
    }
    return s;
}

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return Rng(derive_seed(seed, path));
}

/// Stream purposes; used as the first label of a derivation path.
enum class StreamTag : std::uint64_t {
    Blockage = 1,
    Users = 2,
    Fading = 3,
    Scheduling = 4,
    Layout = 5,
    Candidate = 6,
    Evaluation = 7,
};

constexpr std::uint64_t tag(StreamTag t) noexcept { return static_cast<std::uint64_t>(t); }

}  // namespace iab
