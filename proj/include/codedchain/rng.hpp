#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace codedchain {

// Deterministic random source. All distribution sampling is implemented
// here on top of mt19937_64 so that streams do not depend on the standard
// library's unspecified distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in the open interval (0, 1).
  double uniform01() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform01() < p; }

  // Exponential with the given mean (not rate).
  double exponential(double mean);

  double normal(double mean, double stddev);

  // Shape/scale parameterization.
  double gamma(double shape, double scale);

  std::uint64_t poisson(double mean);

  void fill_bytes(std::span<std::byte> out);

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a master seed and a stream index
// (splitmix64 of master + index increment).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace codedchain
