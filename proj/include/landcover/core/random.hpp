#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace landcover {

// mt19937_64 has a standard-mandated output sequence; the helpers below avoid
// the implementation-defined std distributions so that seeded runs are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent stream keyed by (base, stream).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t substream);

/// Uniform integer in [0, n). n must be positive.
std::size_t uniform_below(Rng& rng, std::size_t n);

/// Uniform real in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace landcover
