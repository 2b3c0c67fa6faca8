#include "codedchain/block.hpp"

#include <cstring>

namespace codedchain {

namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'B', 'L', 'K'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 2 + 2 + 8 + 32 + 4 + 4;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(u_any(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(u_any(4)); }
  std::uint64_t u64() { return u_any(8); }

  void raw(std::uint8_t* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::uint64_t u_any(std::size_t n) {
    need(n);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += n;
    return v;
  }

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw std::invalid_argument("truncated block image");
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t serialized_block_size(std::size_t row_count, std::size_t payload_len) {
  return kHeaderBytes + row_count * (16 + payload_len);
}

std::vector<std::uint8_t> serialize_block(const Block& block) {
  std::size_t payload_len = block.rows.empty() ? 0 : block.rows.front().payload.size();
  for (const auto& row : block.rows) {
    if (row.payload.size() != payload_len) {
      throw std::invalid_argument("block rows must share one payload length");
    }
  }
  std::vector<std::uint8_t> out;
  out.reserve(serialized_block_size(block.rows.size(), payload_len));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, kVersion);
  put_u16(out, 0);
  put_u64(out, block.height);
  out.insert(out.end(), block.parent.begin(), block.parent.end());
  put_u32(out, static_cast<std::uint32_t>(payload_len));
  put_u32(out, static_cast<std::uint32_t>(block.rows.size()));
  for (const auto& row : block.rows) {
    put_u64(out, row.txn_id);
    out.insert(out.end(), row.payload.begin(), row.payload.end());
    put_u64(out, row.state_digest);
  }
  return out;
}

Block deserialize_block(std::span<const std::uint8_t> bytes) {
  Cursor cur(bytes);
  std::uint8_t magic[4];
  cur.raw(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::invalid_argument("bad block magic");
  }
  if (cur.u16() != kVersion) {
    throw std::invalid_argument("unsupported block version");
  }
  cur.u16();  // flags, reserved
  Block block;
  block.height = cur.u64();
  cur.raw(block.parent.data(), block.parent.size());
  std::uint32_t payload_len = cur.u32();
  std::uint32_t row_count = cur.u32();
  block.rows.resize(row_count);
  for (auto& row : block.rows) {
    row.txn_id = cur.u64();
    row.payload.resize(payload_len);
    if (payload_len > 0) {
      cur.raw(row.payload.data(), payload_len);
    }
    row.state_digest = cur.u64();
  }
  if (!cur.exhausted()) {
    throw std::invalid_argument("trailing bytes after block image");
  }
  return block;
}

Digest256 block_digest(const Block& block) {
  auto bytes = serialize_block(block);
  return sha256(bytes.data(), bytes.size());
}

SymbolVector bytes_to_symbols(const std::vector<std::uint8_t>& bytes,
                              std::size_t symbol_count, unsigned bits) {
  if (bits != 8 && bits != 16) {
    throw std::invalid_argument("symbol width must be 8 or 16 bits");
  }
  const std::size_t bytes_per_symbol = bits / 8;
  const std::size_t capacity = symbol_count * bytes_per_symbol;
  if (bytes.size() + 4 > capacity) {
    throw SizeOverflow("serialized block exceeds the group symbol capacity");
  }
  std::vector<std::uint8_t> padded;
  padded.reserve(capacity);
  put_u32(padded, static_cast<std::uint32_t>(bytes.size()));
  padded.insert(padded.end(), bytes.begin(), bytes.end());
  padded.resize(capacity, 0);

  SymbolVector symbols(symbol_count, 0);
  for (std::size_t i = 0; i < symbol_count; ++i) {
    std::uint16_t v = padded[i * bytes_per_symbol];
    if (bytes_per_symbol == 2) {
      v = static_cast<std::uint16_t>(v | (padded[i * 2 + 1] << 8));
    }
    symbols[i] = v;
  }
  return symbols;
}

std::vector<std::uint8_t> symbols_to_bytes(const SymbolVector& symbols, unsigned bits) {
  if (bits != 8 && bits != 16) {
    throw std::invalid_argument("symbol width must be 8 or 16 bits");
  }
  const std::size_t bytes_per_symbol = bits / 8;
  std::vector<std::uint8_t> raw;
  raw.reserve(symbols.size() * bytes_per_symbol);
  for (Symbol s : symbols) {
    raw.push_back(static_cast<std::uint8_t>(s));
    if (bytes_per_symbol == 2) {
      raw.push_back(static_cast<std::uint8_t>(s >> 8));
    }
  }
  if (raw.size() < 4) {
    throw std::invalid_argument("symbol image too short for a length prefix");
  }
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    len |= static_cast<std::uint32_t>(raw[i]) << (8 * i);
  }
  if (4 + static_cast<std::size_t>(len) > raw.size()) {
    throw std::invalid_argument("length prefix exceeds symbol image");
  }
  return std::vector<std::uint8_t>(raw.begin() + 4, raw.begin() + 4 + len);
}

}  // namespace codedchain
