#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "codedchain/assignment.hpp"
#include "codedchain/rng.hpp"
#include "doctest.h"

using namespace codedchain;

namespace {

std::vector<std::uint64_t> make_roster(std::size_t n, std::uint64_t base = 100) {
  std::vector<std::uint64_t> roster(n);
  std::iota(roster.begin(), roster.end(), base);
  return roster;
}

}  // namespace

TEST_CASE("input validation") {
  Rng rng(1);
  CHECK_THROWS(assign_miners(3, 5, {}, rng));
  CHECK_THROWS(assign_miners(3, 0, make_roster(4), rng));
  CHECK_THROWS(assign_miners(3, 2, {5, 3, 9}, rng));     // unsorted
  CHECK_THROWS(assign_miners(3, 2, {3, 3, 9}, rng));     // duplicate
}

TEST_CASE("demanding the full roster copies it without consuming randomness") {
  Rng rng(42);
  Rng witness(42);
  const auto roster = make_roster(6);
  const AssignmentPlan plan = assign_miners(4, 6, roster, rng);
  CHECK(plan.per_transaction == 6);
  REQUIRE(plan.members.size() == 4);
  for (const auto& members : plan.members) CHECK(members == roster);
  // The full-roster path is deterministic, so the stream is untouched.
  CHECK(rng.next_u64() == witness.next_u64());

  Rng rng2(42);
  const AssignmentPlan over = assign_miners(2, 10, roster, rng2);
  CHECK(over.per_transaction == 6);  // clamped to the population
  CHECK(over.members[0] == roster);
}

TEST_CASE("subsets are sorted, duplicate-free draws from the roster") {
  Rng rng(7);
  const auto roster = make_roster(50);
  const AssignmentPlan plan = assign_miners(40, 12, roster, rng);
  CHECK(plan.per_transaction == 12);
  REQUIRE(plan.members.size() == 40);
  for (const auto& members : plan.members) {
    REQUIRE(members.size() == 12);
    CHECK(std::is_sorted(members.begin(), members.end()));
    CHECK(std::adjacent_find(members.begin(), members.end()) == members.end());
    for (std::uint64_t id : members) {
      CHECK(std::binary_search(roster.begin(), roster.end(), id));
    }
  }
}

TEST_CASE("single transaction and single slot work") {
  Rng rng(9);
  const auto roster = make_roster(10);
  const AssignmentPlan plan = assign_miners(1, 1, roster, rng);
  REQUIRE(plan.members.size() == 1);
  REQUIRE(plan.members[0].size() == 1);
  CHECK(std::binary_search(roster.begin(), roster.end(), plan.members[0][0]));
}

TEST_CASE("same seed reproduces the same plan") {
  const auto roster = make_roster(200);
  Rng a(1234);
  Rng b(1234);
  const AssignmentPlan pa = assign_miners(25, 52, roster, a);
  const AssignmentPlan pb = assign_miners(25, 52, roster, b);
  CHECK(pa.members == pb.members);

  Rng c(1235);
  const AssignmentPlan pc = assign_miners(25, 52, roster, c);
  CHECK(pa.members != pc.members);
}

TEST_CASE("per-miner load concentrates at k*m/n") {
  // 100 transactions, 52 miners each, 500 candidates: mean load 10.4.
  const auto roster = make_roster(500);
  Rng rng(2026);
  const int draws = 1000;
  double mean_load = 0.0;
  for (int d = 0; d < draws; ++d) {
    const AssignmentPlan plan = assign_miners(100, 52, roster, rng);
    std::vector<std::uint32_t> load(roster.size(), 0);
    for (const auto& members : plan.members) {
      for (std::uint64_t id : members) ++load[id - roster.front()];
    }
    mean_load +=
        std::accumulate(load.begin(), load.end(), 0.0) / static_cast<double>(load.size());
  }
  mean_load /= draws;
  CHECK(mean_load == doctest::Approx(10.4).epsilon(0.05));

  // Every miner is hit occasionally: the sampler has full support.
  Rng probe(77);
  std::vector<std::uint32_t> seen(roster.size(), 0);
  for (int d = 0; d < 200; ++d) {
    const AssignmentPlan plan = assign_miners(20, 52, roster, probe);
    for (const auto& members : plan.members) {
      for (std::uint64_t id : members) ++seen[id - roster.front()];
    }
  }
  CHECK(*std::min_element(seen.begin(), seen.end()) > 0);
}
