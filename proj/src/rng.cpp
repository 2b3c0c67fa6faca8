#include "codedchain/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace codedchain {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
  // Rejection sampling on the top bits to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<std::int64_t>(uniform_below(span));
}

double Rng::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exponential: mean must be positive");
  return -mean * std::log(1.0 - uniform01());
}

double Rng::normal(double mean, double stddev) {
  // Box-Muller; consumes two uniforms per call, no state carried over so
  // the stream position stays predictable.
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma: shape and scale must be positive");
  // Sum of unit exponentials for the integer part, Johnk's algorithm for
  // the fractional part. Adequate for moderate shapes used here.
  double whole = 0.0;
  double frac = shape;
  while (frac >= 1.0) {
    whole += exponential(1.0);
    frac -= 1.0;
  }
  if (frac > 0.0) {
    for (;;) {
      const double u = uniform01();
      const double v = uniform01();
      const double x = std::pow(u, 1.0 / frac);
      const double y = std::pow(v, 1.0 / (1.0 - frac));
      if (x + y <= 1.0) {
        whole += exponential(1.0) * x / (x + y);
        break;
      }
    }
  }
  return whole * scale;
}

std::uint64_t Rng::poisson(double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson: mean must be nonnegative");
  // Knuth's multiplication method. Poisson is additive, so large means are
  // split into chunks of at most 30 to keep exp(-chunk) well above underflow.
  constexpr double kChunk = 30.0;
  std::uint64_t count = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    const double lambda = std::min(remaining, kChunk);
    remaining -= lambda;
    const double threshold = std::exp(-lambda);
    double product = uniform01();
    while (product > threshold) {
      ++count;
      product *= uniform01();
    }
  }
  return count;
}

void Rng::fill_bytes(std::span<std::byte> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    const std::size_t take = std::min<std::size_t>(8, out.size() - i);
    std::memcpy(out.data() + i, &word, take);
    i += take;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over master xor golden-ratio-stepped stream id.
  std::uint64_t z = master ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace codedchain
