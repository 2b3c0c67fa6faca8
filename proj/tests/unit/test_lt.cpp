#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "codedchain/lt.hpp"
#include "codedchain/precode.hpp"
#include "codedchain/rng.hpp"
#include "codedchain/soliton.hpp"
#include "doctest.h"

using namespace codedchain;

namespace {

std::vector<SymbolVector> random_vectors(std::uint32_t count, std::size_t s, Rng& rng) {
  std::vector<SymbolVector> out(count, SymbolVector(s));
  for (auto& v : out)
    for (auto& x : v) x = static_cast<Symbol>(rng.next_u64());
  return out;
}

std::vector<const CodedBlock*> pointers(const std::vector<CodedBlock>& blocks) {
  std::vector<const CodedBlock*> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(&b);
  return out;
}

}  // namespace

TEST_CASE("parity blocks are the XOR of their neighbors") {
  Rng rng(1);
  const auto inter = random_vectors(20, 8, rng);
  const CodedBlock b = lt_block_from_neighbors(inter, {3, 7, 11});
  SymbolVector expect = inter[2];
  xor_into(expect, inter[6]);
  xor_into(expect, inter[10]);
  CHECK(b.payload == expect);
  CHECK(b.degree() == 3);

  const CodedBlock pair = lt_block_from_neighbors(inter, {1, 2});
  SymbolVector expect2 = inter[0];
  xor_into(expect2, inter[1]);
  CHECK(pair.payload == expect2);
}

TEST_CASE("systematic blocks carry a single intermediate") {
  Rng rng(2);
  const auto inter = random_vectors(10, 4, rng);
  const CodedBlock first = systematic_block(inter, 1);
  CHECK(first.payload == inter[0]);
  CHECK(first.neighbors == std::vector<std::uint32_t>{1});
  const CodedBlock last = systematic_block(inter, 10);
  CHECK(last.neighbors == std::vector<std::uint32_t>{10});
  CHECK(last.degree() == 1);
  CHECK_THROWS(systematic_block(inter, 0));
  CHECK_THROWS(systematic_block(inter, 11));
}

TEST_CASE("encoded degrees follow the distribution without replacement") {
  Rng rng(3);
  const std::uint32_t wbar = 100;
  const auto inter = random_vectors(wbar, 2, rng);
  const DegreeDistribution dist = build_degree_distribution(wbar, 0.15, 0.5);
  std::vector<double> freq(wbar + 1, 0.0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const CodedBlock b = lt_encode_parity(inter, dist, rng);
    REQUIRE(b.degree() >= 2);
    REQUIRE(b.degree() <= wbar);
    CHECK(std::adjacent_find(b.neighbors.begin(), b.neighbors.end()) ==
          b.neighbors.end());  // sorted unique
    CHECK(std::is_sorted(b.neighbors.begin(), b.neighbors.end()));
    freq[b.degree()] += 1.0 / draws;
  }
  double tv = 0.0;
  for (std::uint32_t L = 1; L <= wbar; ++L)
    tv += std::abs(freq[L] - dist.probs[L - 1]);
  CHECK(tv / 2.0 <= 0.02);
}

TEST_CASE("peeling recovers everything from systematic input") {
  Rng rng(4);
  const std::uint32_t wbar = 25;
  const auto inter = random_vectors(wbar, 6, rng);
  std::vector<CodedBlock> blocks;
  for (std::uint32_t j = 1; j <= wbar; ++j) blocks.push_back(systematic_block(inter, j));
  const auto ptrs = pointers(blocks);
  const PeelResult peel = peel_decode(ptrs, wbar);
  CHECK(peel.complete);
  CHECK(peel.resolved_count == wbar);
  for (std::uint32_t i = 0; i < wbar; ++i) CHECK(peel.values[i] == inter[i]);
}

TEST_CASE("a lone degree-2 block cannot seed peeling") {
  Rng rng(5);
  const auto inter = random_vectors(4, 4, rng);
  std::vector<CodedBlock> blocks{lt_block_from_neighbors(inter, {1, 2})};
  const auto ptrs = pointers(blocks);
  const PeelResult peel = peel_decode(ptrs, 4);
  CHECK(!peel.complete);
  CHECK(peel.resolved_count == 0);
}

TEST_CASE("peeling is order-insensitive") {
  Rng rng(6);
  const std::uint32_t wbar = 12;
  const auto inter = random_vectors(wbar, 4, rng);
  std::vector<CodedBlock> blocks;
  for (std::uint32_t j = 1; j <= 5; ++j) blocks.push_back(systematic_block(inter, j));
  blocks.push_back(lt_block_from_neighbors(inter, {5, 6}));
  blocks.push_back(lt_block_from_neighbors(inter, {6, 7}));
  blocks.push_back(lt_block_from_neighbors(inter, {7, 8, 9}));
  blocks.push_back(lt_block_from_neighbors(inter, {8, 9}));
  blocks.push_back(lt_block_from_neighbors(inter, {9, 10, 11, 12}));

  auto ptrs = pointers(blocks);
  const PeelResult base = peel_decode(ptrs, wbar);
  for (int shuffle = 0; shuffle < 20; ++shuffle) {
    for (std::size_t i = ptrs.size(); i > 1; --i)
      std::swap(ptrs[i - 1], ptrs[rng.uniform_below(i)]);
    const PeelResult again = peel_decode(ptrs, wbar);
    CHECK(again.resolved_count == base.resolved_count);
    CHECK(again.resolved == base.resolved);
    for (std::uint32_t i = 0; i < wbar; ++i)
      if (base.resolved[i]) CHECK(again.values[i] == base.values[i]);
  }
}

TEST_CASE("inconsistent duplicate neighbor sets raise IntegrityError") {
  Rng rng(7);
  const auto inter = random_vectors(3, 4, rng);
  std::vector<CodedBlock> blocks;
  blocks.push_back(systematic_block(inter, 1));
  blocks.push_back(systematic_block(inter, 2));
  CodedBlock bad = lt_block_from_neighbors(inter, {1, 2});
  bad.payload[0] ^= 1;  // corrupt
  blocks.push_back(bad);
  const auto ptrs = pointers(blocks);
  CHECK_THROWS_AS(peel_decode(ptrs, 3), IntegrityError);
}

TEST_CASE("malformed neighbor sets are rejected") {
  Rng rng(8);
  const auto inter = random_vectors(5, 4, rng);
  CHECK_THROWS(lt_block_from_neighbors(inter, {}));
  CHECK_THROWS(lt_block_from_neighbors(inter, {0}));
  CHECK_THROWS(lt_block_from_neighbors(inter, {6}));
  CHECK_THROWS(lt_block_from_neighbors(inter, {2, 2}));
  CHECK_THROWS(lt_block_from_neighbors(inter, {3, 2}));
}

TEST_CASE("graph-only peel count matches payload peeling") {
  Rng rng(9);
  const std::uint32_t wbar = 40;
  const auto inter = random_vectors(wbar, 2, rng);
  const DegreeDistribution dist = build_degree_distribution(wbar, 0.15, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CodedBlock> blocks;
    std::vector<std::vector<std::uint32_t>> sets;
    for (std::uint32_t j = 1; j <= 10; ++j) {
      blocks.push_back(systematic_block(inter, j));
      sets.push_back(blocks.back().neighbors);
    }
    for (int k = 0; k < 45; ++k) {
      blocks.push_back(lt_encode_parity(inter, dist, rng));
      sets.push_back(blocks.back().neighbors);
    }
    const auto ptrs = pointers(blocks);
    CHECK(peel_decode(ptrs, wbar).resolved_count == peel_count(sets, wbar));
  }
}

TEST_CASE("targeted repair cancels a cached edge block") {
  Rng rng(10);
  const auto inter = random_vectors(6, 8, rng);
  std::vector<CodedBlock> blocks;
  CodedBlock edge = lt_block_from_neighbors(inter, {1, 2});
  edge.owner = 9;
  blocks.push_back(edge);
  std::map<std::uint32_t, SymbolVector> cache;
  cache[2] = inter[1];
  const auto ptrs = pointers(blocks);
  const auto repaired = rnm_repair(1, ptrs, cache);
  REQUIRE(repaired.has_value());
  CHECK(*repaired == inter[0]);
}

TEST_CASE("repair scans responders in ascending owner order") {
  Rng rng(11);
  const auto inter = random_vectors(4, 4, rng);
  CodedBlock wrong = lt_block_from_neighbors(inter, {1, 3});  // 3 not cached
  wrong.owner = 1;
  CodedBlock right = lt_block_from_neighbors(inter, {1, 2});
  right.owner = 2;
  std::map<std::uint32_t, SymbolVector> cache;
  cache[2] = inter[1];
  std::vector<CodedBlock> blocks{right, wrong};  // order must not matter
  const auto ptrs = pointers(blocks);
  const auto repaired = rnm_repair(1, ptrs, cache);
  REQUIRE(repaired.has_value());
  CHECK(*repaired == inter[0]);
}

TEST_CASE("repair fails without an edge block or closable neighbors") {
  Rng rng(12);
  const auto inter = random_vectors(4, 4, rng);
  std::vector<CodedBlock> blocks{lt_block_from_neighbors(inter, {2, 3})};
  std::map<std::uint32_t, SymbolVector> cache;
  const auto ptrs = pointers(blocks);
  CHECK(!rnm_repair(1, ptrs, cache).has_value());   // no edge set
  CHECK(!rnm_repair(2, ptrs, cache).has_value());   // edge set, nothing cached
  CHECK(!rnm_repair(1, {}, cache).has_value());     // no responders at all
}

TEST_CASE("randomized repairs are always exact") {
  Rng rng(13);
  const std::uint32_t wbar = 50;
  const auto inter = random_vectors(wbar, 4, rng);
  const DegreeDistribution dist = build_degree_distribution(wbar, 0.15, 0.5);
  int successes = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<CodedBlock> blocks;
    for (int k = 0; k < 60; ++k) {
      CodedBlock b = lt_encode_parity(inter, dist, rng);
      b.owner = static_cast<std::uint64_t>(k + 1);
      blocks.push_back(std::move(b));
    }
    std::map<std::uint32_t, SymbolVector> cache;
    for (std::uint32_t i = 1; i <= wbar; ++i)
      if (rng.bernoulli(0.5)) cache[i] = inter[i - 1];
    const std::uint32_t target = 1 + static_cast<std::uint32_t>(rng.uniform_below(wbar));
    const auto ptrs = pointers(blocks);
    const auto repaired = rnm_repair(target, ptrs, cache);
    if (repaired) {
      ++successes;
      CHECK(*repaired == inter[target - 1]);
    }
  }
  CHECK(successes > 0);  // the scenario must actually exercise the success path
}

TEST_CASE("full decode falls back to elimination when peeling stalls") {
  Rng rng(14);
  const Precode precode(16, 8, 10);
  const auto sources = random_vectors(8, 4, rng);
  const auto inter = precode.encode(sources);
  // Parity-only collection: no degree-1 seed exists, elimination must solve.
  const DegreeDistribution dist = build_degree_distribution(10, 0.15, 0.5);
  int ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CodedBlock> blocks;
    for (int k = 0; k < 30; ++k) blocks.push_back(lt_encode_parity(inter, dist, rng));
    const auto ptrs = pointers(blocks);
    CHECK(peel_decode(ptrs, 10).resolved_count == 0);
    const auto decoded = full_decode(ptrs, precode);
    if (decoded) {
      CHECK(*decoded == sources);
      ++ok;
    }
  }
  CHECK(ok >= 45);
}

TEST_CASE("full decode succeeds through the precode with partial peel") {
  Rng rng(15);
  const Precode precode(16, 4, 6);
  const auto sources = random_vectors(4, 4, rng);
  const auto inter = precode.encode(sources);
  // Exactly w of wbar intermediates resolvable (positions 2..5).
  std::vector<CodedBlock> blocks;
  for (std::uint32_t j = 2; j <= 5; ++j) blocks.push_back(systematic_block(inter, j));
  const auto ptrs = pointers(blocks);
  const auto decoded = full_decode(ptrs, precode);
  REQUIRE(decoded.has_value());
  CHECK(*decoded == sources);
}

TEST_CASE("full decode fails below the precode threshold") {
  Rng rng(16);
  const Precode precode(16, 4, 6);
  const auto sources = random_vectors(4, 4, rng);
  const auto inter = precode.encode(sources);
  std::vector<CodedBlock> blocks;
  for (std::uint32_t j = 1; j <= 3; ++j) blocks.push_back(systematic_block(inter, j));
  const auto ptrs = pointers(blocks);
  CHECK(!full_decode(ptrs, precode).has_value());
}

TEST_CASE("decode monotonicity: extra blocks never break success") {
  Rng rng(17);
  const Precode precode(16, 8, 10);
  const auto sources = random_vectors(8, 2, rng);
  const auto inter = precode.encode(sources);
  const DegreeDistribution dist = build_degree_distribution(10, 0.15, 0.5);
  std::vector<CodedBlock> blocks;
  for (std::uint32_t j = 1; j <= 10; ++j) blocks.push_back(systematic_block(inter, j));
  for (int trial = 0; trial < 40; ++trial) {
    blocks.push_back(lt_encode_parity(inter, dist, rng));
    const auto ptrs = pointers(blocks);
    const auto decoded = full_decode(ptrs, precode);
    REQUIRE(decoded.has_value());
    CHECK(*decoded == sources);
  }
}

TEST_CASE("group size selection obeys its structural constraints") {
  Rng rng(18);
  SUBCASE("budget never binds") {
    const GroupSize g = choose_group_size(10, 0.8, 1.0, 10, rng);
    CHECK(g.wbar == 9);
    CHECK(g.w == 8);  // ceil(0.8 * 9)
    CHECK(!g.warning);
  }
  SUBCASE("protocol collections pass at large n") {
    const GroupSize g = choose_group_size(1000, 0.8, 0.01, 200, rng);
    CHECK(g.wbar >= 600);
    CHECK(g.wbar <= 999);
    CHECK(g.w == static_cast<std::uint32_t>(
                     std::ceil(0.8 * static_cast<double>(g.wbar))));
    CHECK(g.measured_failure <= 0.01);
    CHECK(!g.warning);
  }
  SUBCASE("cap restricts the search") {
    const GroupSize g = choose_group_size(1000, 0.8, 0.01, 50, rng, 75);
    CHECK(g.wbar <= 75);
    CHECK(g.wbar > g.w);
    CHECK(g.w >= 2);
  }
  SUBCASE("tiny rosters fall back with a warning") {
    const GroupSize g = choose_group_size(4, 0.999, 0.0, 10, rng);
    CHECK(g.w == 2);
    CHECK(g.wbar == 3);
    CHECK(g.warning);
  }
  SUBCASE("rate arithmetic") {
    const GroupSize g = choose_group_size(6, 0.8, 1.0, 5, rng);
    CHECK(g.wbar == 5);
    CHECK(g.w == 4);
  }
}
