#pragma once

#include <cstdint>
#include <vector>

namespace codedchain {

// GF(2^p) arithmetic for p in {8, 16}, via exp/log tables over a primitive
// polynomial. Addition is XOR; tables make mul/div/inv O(1).
class GaloisField {
 public:
  // Shared immutable instance per field size (tables are built once).
  static const GaloisField& get(unsigned bits);

  unsigned bits() const { return bits_; }
  std::uint32_t order() const { return order_; }          // 2^p
  std::uint32_t max_element() const { return order_ - 1; }

  static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  std::uint32_t div(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t inv(std::uint32_t a) const;

  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;

 private:
  explicit GaloisField(unsigned bits);

  unsigned bits_;
  std::uint32_t order_;
  std::vector<std::uint32_t> exp_;  // exp_[i] = x^i, doubled so mul skips a mod
  std::vector<std::uint32_t> log_;
};

}  // namespace codedchain
