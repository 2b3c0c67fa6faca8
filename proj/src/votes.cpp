#include "codedchain/votes.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <stdexcept>

namespace codedchain {

namespace {

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

}  // namespace

Digest256 commit_vote(std::uint64_t epoch, std::uint64_t miner,
                      const std::vector<std::pair<std::uint64_t, Vote>>& votes,
                      const VoteSalt& salt) {
  for (std::size_t i = 1; i < votes.size(); ++i) {
    if (votes[i - 1].first >= votes[i].first) {
      throw std::invalid_argument("ballot entries must be strictly ascending by id");
    }
  }
  std::vector<std::uint8_t> buf;
  buf.reserve(24 + votes.size() * 9 + salt.size());
  append_u64_le(buf, epoch);
  append_u64_le(buf, miner);
  append_u64_le(buf, votes.size());
  for (const auto& [txn, vote] : votes) {
    append_u64_le(buf, txn);
    buf.push_back(static_cast<std::uint8_t>(vote));
  }
  buf.insert(buf.end(), salt.begin(), salt.end());
  return sha256(buf.data(), buf.size());
}

bool reveal_matches(const VoteRecord& record) {
  return commit_vote(record.epoch, record.miner, record.votes, record.salt) ==
         record.commitment;
}

bool majority_accepts(std::uint32_t accepts, std::uint32_t assigned) {
  if (accepts > assigned) {
    throw std::invalid_argument("more accepts than assigned voters");
  }
  return 2ull * accepts > assigned;
}

std::optional<std::uint64_t> majority_state(
    const std::vector<std::uint64_t>& proposals, std::uint32_t assigned) {
  if (proposals.size() > assigned) {
    throw std::invalid_argument("more proposals than assigned voters");
  }
  std::map<std::uint64_t, std::uint32_t> counts;
  for (std::uint64_t value : proposals) {
    ++counts[value];
  }
  for (const auto& [value, count] : counts) {
    if (2ull * count > assigned) {
      return value;
    }
  }
  return std::nullopt;
}

}  // namespace codedchain
