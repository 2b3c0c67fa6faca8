#pragma once

#include <cstdint>
#include <vector>

namespace codedchain {

// Fraction of the ledger each miner stores when every closed group of
// raw blocks is replaced by one coded block per miner: with chain length q
// and closed group sizes w_l, the fraction is (q - sum w_l + count) / q.
double storage_fraction(std::uint64_t chain_length,
                        const std::vector<std::uint32_t>& closed_group_sizes);

// Gini index of a nonnegative sample; 0 for an empty, all-zero, or
// single-element sample. Sorted-rank form of the mean-absolute-difference
// definition, O(n log n).
double gini(const std::vector<double>& values);

// Shannon entropy in bits of the normalized shares of a nonnegative sample;
// zero-mass samples have zero entropy.
double entropy_bits(const std::vector<double>& values);

}  // namespace codedchain
