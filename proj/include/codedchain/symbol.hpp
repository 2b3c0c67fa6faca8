#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace codedchain {

// One field element of GF(2^p). p <= 16, so uint16_t holds any symbol; for
// p = 8 values simply stay below 256.
using Symbol = std::uint16_t;

// A block's payload: s symbols.
using SymbolVector = std::vector<Symbol>;

inline void xor_into(SymbolVector& dst, const SymbolVector& src) {
  assert(dst.size() == src.size());
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

inline bool all_zero(const SymbolVector& v) {
  for (Symbol s : v)
    if (s != 0) return false;
  return true;
}

}  // namespace codedchain
