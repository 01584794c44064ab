#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace frugal {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive mix of seed components.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept;

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) noexcept {
    return derive_seed({base, fnv1a(tag)});
}

/// Uniform integer in [0, n) drawn directly from raw engine output so the
/// sequence does not depend on the standard library's distribution code.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Standard normal via Box-Muller.
double normal01(Rng& rng);

/// Fisher-Yates shuffle through uniform_index.
template <class It>
void shuffle(It first, It last, Rng& rng) {
    auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
        auto j = uniform_index(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

} // namespace frugal
