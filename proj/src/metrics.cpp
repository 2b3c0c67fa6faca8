#include "codedchain/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codedchain {

double storage_fraction(std::uint64_t chain_length,
                        const std::vector<std::uint32_t>& closed_group_sizes) {
  if (chain_length == 0) {
    throw std::invalid_argument("storage fraction of an empty chain");
  }
  std::uint64_t covered = 0;
  for (std::uint32_t w : closed_group_sizes) {
    if (w == 0) {
      throw std::invalid_argument("closed group of size zero");
    }
    covered += w;
  }
  if (covered > chain_length) {
    throw std::invalid_argument("closed groups exceed the chain length");
  }
  double q = static_cast<double>(chain_length);
  return (q - static_cast<double>(covered) +
          static_cast<double>(closed_group_sizes.size())) /
         q;
}

double gini(const std::vector<double>& values) {
  if (values.size() < 2) {
    return 0.0;
  }
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) {
    throw std::invalid_argument("gini of a negative sample");
  }
  double total = 0.0;
  double weighted = 0.0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  if (total <= 0.0) {
    return 0.0;
  }
  return weighted / (n * total);
}

double entropy_bits(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) {
    if (v < 0.0) {
      throw std::invalid_argument("entropy of a negative sample");
    }
    total += v;
  }
  if (total <= 0.0) {
    return 0.0;
  }
  double bits = 0.0;
  for (double v : values) {
    if (v > 0.0) {
      double share = v / total;
      bits -= share * std::log2(share);
    }
  }
  return bits;
}

}  // namespace codedchain
