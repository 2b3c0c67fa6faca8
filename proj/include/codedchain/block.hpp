#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "codedchain/sha256.hpp"
#include "codedchain/symbol.hpp"

namespace codedchain {

class SizeOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One confirmed transaction inside a block: the opaque transaction payload
// plus the 8-byte truncated digest of its agreed state update.
struct BlockRow {
  std::uint64_t txn_id = 0;
  std::vector<std::uint8_t> payload;
  std::uint64_t state_digest = 0;
};

struct Block {
  std::uint64_t height = 0;
  Digest256 parent{};
  std::vector<BlockRow> rows;
};

// Byte layout: "CBLK" | version u16 | flags u16 | height u64 | parent 32B |
// payload_len u32 | row_count u32 | rows (txn u64, payload, state u64).
// All integers little-endian. Rows must share one payload length.
std::vector<std::uint8_t> serialize_block(const Block& block);
Block deserialize_block(std::span<const std::uint8_t> bytes);

Digest256 block_digest(const Block& block);

// Exact number of serialized bytes for row_count rows of payload_len bytes.
std::size_t serialized_block_size(std::size_t row_count, std::size_t payload_len);

// Fixed-width symbol image: u32 length prefix, the bytes, zero fill up to
// symbol_count symbols of the field's width. Throws SizeOverflow when the
// prefixed bytes do not fit.
SymbolVector bytes_to_symbols(const std::vector<std::uint8_t>& bytes,
                              std::size_t symbol_count, unsigned bits);
std::vector<std::uint8_t> symbols_to_bytes(const SymbolVector& symbols, unsigned bits);

}  // namespace codedchain
