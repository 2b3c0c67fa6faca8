#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace codedchain {

using Digest256 = std::array<std::uint8_t, 32>;

// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
 public:
  Sha256() { reset(); }

  void reset();
  void update(const void* data, std::size_t len);
  void update(std::span<const std::uint8_t> data) { update(data.data(), data.size()); }
  Digest256 finalize();

 private:
  void process_block(const std::uint8_t* block);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buffer_;
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

Digest256 sha256(const void* data, std::size_t len);
Digest256 sha256(std::span<const std::uint8_t> data);

std::string hex_digest(const Digest256& d);

// First 8 bytes of the digest, big-endian, as a compact fingerprint.
std::uint64_t digest_prefix64(const Digest256& d);

}  // namespace codedchain
