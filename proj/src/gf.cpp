#include "codedchain/gf.hpp"

#include <stdexcept>

namespace codedchain {

namespace {

// Primitive polynomials: x^8+x^4+x^3+x^2+1 and x^16+x^12+x^3+x+1.
constexpr std::uint32_t kPoly8 = 0x11D;
constexpr std::uint32_t kPoly16 = 0x1100B;

}  // namespace

GaloisField::GaloisField(unsigned bits) : bits_(bits), order_(1u << bits) {
  std::uint32_t poly;
  switch (bits) {
    case 8:
      poly = kPoly8;
      break;
    case 16:
      poly = kPoly16;
      break;
    default:
      throw std::invalid_argument("GaloisField: field size must be 8 or 16 bits");
  }

  exp_.assign(2 * (order_ - 1), 0);
  log_.assign(order_, 0);

  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < order_ - 1; ++i) {
    if (i > 0 && x == 1)
      throw std::logic_error("GaloisField: generator is not primitive");
    exp_[i] = x;
    exp_[i + order_ - 1] = x;  // second copy lets mul index without a mod
    log_[x] = i;
    x <<= 1;
    if (x & order_) x ^= poly;
  }
  if (x != 1) throw std::logic_error("GaloisField: generator cycle did not close");
}

const GaloisField& GaloisField::get(unsigned bits) {
  static const GaloisField field8(8);
  static const GaloisField field16(16);
  switch (bits) {
    case 8:
      return field8;
    case 16:
      return field16;
    default:
      throw std::invalid_argument("GaloisField: field size must be 8 or 16 bits");
  }
}

std::uint32_t GaloisField::div(std::uint32_t a, std::uint32_t b) const {
  if (b == 0) throw std::domain_error("GaloisField: division by zero");
  if (a == 0) return 0;
  return exp_[log_[a] + (order_ - 1) - log_[b]];
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("GaloisField: zero has no inverse");
  return exp_[(order_ - 1) - log_[a]];
}

std::uint32_t GaloisField::pow(std::uint32_t a, std::uint64_t e) const {
  if (a == 0) return e == 0 ? 1 : 0;
  const std::uint64_t cycle = order_ - 1;
  const std::uint64_t k = (static_cast<std::uint64_t>(log_[a]) * (e % cycle)) % cycle;
  return exp_[k];
}

}  // namespace codedchain
