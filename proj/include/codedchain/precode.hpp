#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "codedchain/gf.hpp"
#include "codedchain/symbol.hpp"

namespace codedchain {

// Systematic MDS precode over GF(2^p): the w source vectors are treated,
// symbol position by symbol position, as evaluations of a degree-(w-1)
// polynomial at points 0..w-1; parity outputs are evaluations at points
// w..wbar-1 (Reed-Solomon style). Any w of the wbar outputs reconstruct the
// sources exactly.
class Precode {
 public:
  Precode(unsigned bits, std::uint32_t w, std::uint32_t wbar);

  std::uint32_t w() const { return w_; }
  std::uint32_t wbar() const { return wbar_; }
  unsigned bits() const { return bits_; }

  // wbar outputs; the first w are the inputs themselves.
  std::vector<SymbolVector> encode(const std::vector<SymbolVector>& sources) const;

  // Reconstructs the w source vectors from any >= w distinct outputs.
  // indices are 1-based output positions (1..wbar) matching values.
  // Returns nullopt when fewer than w distinct valid indices are supplied.
  std::optional<std::vector<SymbolVector>> erasure_decode(
      const std::vector<std::uint32_t>& indices,
      const std::vector<const SymbolVector*>& values) const;

 private:
  // Lagrange basis coefficients for evaluating the source polynomial at
  // point x given samples at the points listed in xs.
  std::vector<std::uint32_t> lagrange_row(const std::vector<std::uint32_t>& xs,
                                          std::uint32_t x) const;

  const GaloisField& field_;
  unsigned bits_;
  std::uint32_t w_;
  std::uint32_t wbar_;
  // parity_rows_[r][i]: weight of source i in parity output w+r+1.
  std::vector<std::vector<std::uint32_t>> parity_rows_;
};

}  // namespace codedchain
