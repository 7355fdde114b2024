#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace verigame::rng {

using Generator = std::mt19937_64;

// Unbiased draw in [0, n) via rejection sampling. Avoids the
// implementation-defined behaviour of std::uniform_int_distribution so that
// seeded runs replay identically.
inline std::uint64_t below(Generator& gen, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double unit(Generator& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

// In-place Fisher-Yates shuffle using below().
template <typename T>
void shuffle(Generator& gen, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = std::size_t(below(gen, i));
    std::swap(items[i - 1], items[j]);
  }
}

// Uniform k-subset of [0, n) by partial Fisher-Yates; result order is the
// draw order.
std::vector<std::size_t> sample_indices(Generator& gen, std::size_t n,
                                        std::size_t k);

std::string random_salt(Generator& gen);

}  // namespace verigame::rng
