#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace uncoupled {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream...); each tuple of stream tags
/// gives its own reproducible sequence.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {})
{
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(seed));
    words.push_back(static_cast<std::uint32_t>(seed >> 32));
    for (std::uint64_t s : stream) {
        words.push_back(static_cast<std::uint32_t>(s));
        words.push_back(static_cast<std::uint32_t>(s >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

} // namespace uncoupled
