#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "codedchain/sha256.hpp"

namespace codedchain {

enum class Vote : std::uint8_t {
  kReject = 0,
  kAccept = 1,
  kAbstain = 2,
};

using VoteSalt = std::array<std::uint8_t, 16>;

// One miner's revealed ballot for one epoch. Entries are sorted by
// transaction id; a transaction the miner was assigned but did not list is
// treated as abstention by the tally.
struct VoteRecord {
  std::uint64_t miner = 0;
  std::uint64_t epoch = 0;
  std::vector<std::pair<std::uint64_t, Vote>> votes;
  VoteSalt salt{};
  Digest256 commitment{};
};

// Commitment digest over the canonical encoding
//   epoch u64 LE | miner u64 LE | count u64 LE | (txn u64 LE, vote u8)* | salt
// Votes must already be sorted ascending by transaction id.
Digest256 commit_vote(std::uint64_t epoch, std::uint64_t miner,
                      const std::vector<std::pair<std::uint64_t, Vote>>& votes,
                      const VoteSalt& salt);

// Recomputes the commitment from the revealed fields and compares.
bool reveal_matches(const VoteRecord& record);

// Strict-majority rule: accepted iff accepts > assigned / 2. Abstentions and
// missing ballots stay in the denominator, so an even split rejects.
bool majority_accepts(std::uint32_t accepts, std::uint32_t assigned);

// State consensus for one accepted transaction: returns the proposal value
// backed by a strict majority of the assigned set, if any. nullopt demotes
// the transaction back to the pool.
std::optional<std::uint64_t> majority_state(
    const std::vector<std::uint64_t>& proposals, std::uint32_t assigned);

}  // namespace codedchain
