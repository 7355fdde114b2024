#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace verigame::hash {

// Self-contained SHA-256. Used for content commitments, commit-reveal
// digests, the event-log hash chain, and seed derivation.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::array<std::uint8_t, 32> finish();

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint64_t total_len_ = 0;
  std::uint8_t buffer_[64];
  std::size_t buffer_len_ = 0;
};

std::array<std::uint8_t, 32> sha256(std::string_view data);
std::string sha256_hex(std::string_view data);
std::string to_hex(const std::array<std::uint8_t, 32>& digest);

// First eight digest bytes of (domain || big-endian payload), as a seed.
std::uint64_t derive_seed(std::uint64_t base, std::string_view domain,
                          std::uint64_t index);

}  // namespace verigame::hash
