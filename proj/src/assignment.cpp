#include "codedchain/assignment.hpp"

#include <algorithm>
#include <stdexcept>

namespace codedchain {

AssignmentPlan assign_miners(std::size_t k, std::uint32_t m,
                             const std::vector<std::uint64_t>& roster, Rng& rng) {
  if (roster.empty()) {
    throw std::invalid_argument("cannot assign from an empty roster");
  }
  if (m == 0) {
    throw std::invalid_argument("assignment size must be positive");
  }
  if (!std::is_sorted(roster.begin(), roster.end()) ||
      std::adjacent_find(roster.begin(), roster.end()) != roster.end()) {
    throw std::invalid_argument("roster must be sorted and duplicate-free");
  }

  const std::size_t n = roster.size();
  const std::size_t take = std::min<std::size_t>(m, n);

  AssignmentPlan plan;
  plan.per_transaction = static_cast<std::uint32_t>(take);
  plan.members.resize(k);

  if (take == n) {
    for (auto& members : plan.members) {
      members = roster;
    }
    return plan;
  }

  // Floyd's sampling: uniform over subsets, O(take) draws per transaction.
  std::vector<char> picked(n, 0);
  std::vector<std::size_t> touched;
  touched.reserve(take);
  for (auto& members : plan.members) {
    members.reserve(take);
    for (std::size_t j = n - take; j < n; ++j) {
      std::size_t t = static_cast<std::size_t>(rng.uniform_below(j + 1));
      std::size_t pick = picked[t] ? j : t;
      picked[pick] = 1;
      touched.push_back(pick);
      members.push_back(roster[pick]);
    }
    std::sort(members.begin(), members.end());
    for (std::size_t idx : touched) {
      picked[idx] = 0;
    }
    touched.clear();
  }
  return plan;
}

}  // namespace codedchain
