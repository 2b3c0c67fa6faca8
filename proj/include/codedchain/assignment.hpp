#pragma once

#include <cstdint>
#include <vector>

#include "codedchain/rng.hpp"

namespace codedchain {

// Verification assignments for one epoch: members[i] is the sorted set of
// miner ids asked to vote on the i-th selected transaction.
struct AssignmentPlan {
  std::uint32_t per_transaction = 0;  // min(requested, roster size)
  std::vector<std::vector<std::uint64_t>> members;
};

// Draws, independently for each of k transactions, a uniform sample of
// min(m, |roster|) distinct miners. roster must be sorted ascending with
// unique ids; when m covers the whole roster no randomness is consumed.
AssignmentPlan assign_miners(std::size_t k, std::uint32_t m,
                             const std::vector<std::uint64_t>& roster, Rng& rng);

}  // namespace codedchain
