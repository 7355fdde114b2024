#include "verigame/rng.hpp"

#include <numeric>
#include <string>

namespace verigame::rng {

std::vector<std::size_t> sample_indices(Generator& gen, std::size_t n,
                                        std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k && i < n; ++i) {
    std::size_t j = i + std::size_t(below(gen, n - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

std::string random_salt(Generator& gen) {
  static const char* kHex = "0123456789abcdef";
  std::string salt;
  salt.reserve(32);
  for (int chunk = 0; chunk < 2; ++chunk) {
    std::uint64_t v = gen();
    for (int i = 0; i < 16; ++i) {
      salt.push_back(kHex[(v >> (60 - 4 * i)) & 0xf]);
    }
  }
  return salt;
}

}  // namespace verigame::rng
