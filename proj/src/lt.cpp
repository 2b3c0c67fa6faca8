#include "codedchain/lt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace codedchain {

namespace {

void validate_neighbors(const std::vector<std::uint32_t>& neighbors,
                        std::uint32_t wbar) {
  if (neighbors.empty())
    throw std::invalid_argument("coded block: empty neighbor set");
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    if (neighbors[i] < 1 || neighbors[i] > wbar)
      throw std::out_of_range("coded block: neighbor index out of range");
    if (i > 0 && neighbors[i] <= neighbors[i - 1])
      throw std::invalid_argument("coded block: neighbors must be sorted and distinct");
  }
}

}  // namespace

std::vector<std::uint32_t> sample_neighbors(const DegreeDistribution& dist,
                                            Rng& rng) {
  const std::uint32_t degree = dist.sample(rng);
  // Floyd's algorithm: uniform subset of size `degree` from 1..wbar.
  std::unordered_set<std::uint32_t> chosen;
  for (std::uint32_t j = dist.wbar - degree + 1; j <= dist.wbar; ++j) {
    const std::uint32_t t = static_cast<std::uint32_t>(rng.uniform_below(j)) + 1;
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint32_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

CodedBlock lt_block_from_neighbors(const std::vector<SymbolVector>& intermediates,
                                   std::vector<std::uint32_t> neighbors) {
  const auto wbar = static_cast<std::uint32_t>(intermediates.size());
  validate_neighbors(neighbors, wbar);
  CodedBlock block;
  block.payload = intermediates[neighbors.front() - 1];
  for (std::size_t i = 1; i < neighbors.size(); ++i)
    xor_into(block.payload, intermediates[neighbors[i] - 1]);
  block.neighbors = std::move(neighbors);
  return block;
}

CodedBlock lt_encode_parity(const std::vector<SymbolVector>& intermediates,
                            const DegreeDistribution& dist, Rng& rng) {
  if (intermediates.empty())
    throw std::invalid_argument("lt_encode_parity: no intermediates");
  if (intermediates.size() != dist.wbar)
    throw std::invalid_argument("lt_encode_parity: distribution/group size mismatch");
  return lt_block_from_neighbors(intermediates, sample_neighbors(dist, rng));
}

CodedBlock systematic_block(const std::vector<SymbolVector>& intermediates,
                            std::uint32_t j) {
  if (j < 1 || j > intermediates.size())
    throw std::out_of_range("systematic_block: index out of range");
  CodedBlock block;
  block.neighbors = {j};
  block.payload = intermediates[j - 1];
  return block;
}

PeelResult peel_decode(std::span<const CodedBlock* const> blocks,
                       std::uint32_t wbar) {
  const std::size_t n = blocks.size();
  std::vector<SymbolVector> pay(n);
  std::vector<std::uint32_t> count(n);
  std::vector<std::uint32_t> xsum(n, 0);
  std::vector<std::vector<std::uint32_t>> adjacency(wbar + 1);

  std::size_t symbol_len = 0;
  bool have_len = false;
  for (std::size_t b = 0; b < n; ++b) {
    const CodedBlock& block = *blocks[b];
    validate_neighbors(block.neighbors, wbar);
    if (!have_len) {
      symbol_len = block.payload.size();
      have_len = true;
    } else if (block.payload.size() != symbol_len) {
      throw std::invalid_argument("peel_decode: ragged payloads");
    }
    pay[b] = block.payload;
    count[b] = block.degree();
    for (std::uint32_t h : block.neighbors) {
      xsum[b] ^= h;
      adjacency[h].push_back(static_cast<std::uint32_t>(b));
    }
  }

  PeelResult result;
  result.values.assign(wbar, SymbolVector{});
  result.resolved.assign(wbar, 0);

  std::deque<std::uint32_t> ready;
  for (std::size_t b = 0; b < n; ++b)
    if (count[b] == 1) ready.push_back(static_cast<std::uint32_t>(b));

  while (!ready.empty()) {
    const std::uint32_t b = ready.front();
    ready.pop_front();
    if (count[b] != 1) continue;  // reduced further since it was queued
    const std::uint32_t i = xsum[b];
    // Residual neighbors are never already-resolved: resolution subtracts
    // the intermediate from every referencing block immediately.
    result.resolved[i - 1] = 1;
    result.values[i - 1] = pay[b];
    ++result.resolved_count;
    for (std::uint32_t b2 : adjacency[i]) {
      xor_into(pay[b2], result.values[i - 1]);
      xsum[b2] ^= i;
      --count[b2];
      if (count[b2] == 1) {
        ready.push_back(b2);
      } else if (count[b2] == 0 && !all_zero(pay[b2])) {
        throw IntegrityError("peel_decode: conflicting payloads for one neighbor set");
      }
    }
  }

  result.complete = (result.resolved_count == wbar);
  return result;
}

std::uint32_t peel_count(const std::vector<std::vector<std::uint32_t>>& neighbor_sets,
                         std::uint32_t wbar) {
  const std::size_t n = neighbor_sets.size();
  std::vector<std::uint32_t> count(n);
  std::vector<std::uint32_t> xsum(n, 0);
  std::vector<std::vector<std::uint32_t>> adjacency(wbar + 1);
  for (std::size_t b = 0; b < n; ++b) {
    count[b] = static_cast<std::uint32_t>(neighbor_sets[b].size());
    for (std::uint32_t h : neighbor_sets[b]) {
      xsum[b] ^= h;
      adjacency[h].push_back(static_cast<std::uint32_t>(b));
    }
  }

  std::vector<char> resolved(wbar + 1, 0);
  std::uint32_t resolved_count = 0;
  std::deque<std::uint32_t> ready;
  for (std::size_t b = 0; b < n; ++b)
    if (count[b] == 1) ready.push_back(static_cast<std::uint32_t>(b));

  while (!ready.empty()) {
    const std::uint32_t b = ready.front();
    ready.pop_front();
    if (count[b] != 1) continue;
    const std::uint32_t i = xsum[b];
    resolved[i] = 1;
    ++resolved_count;
    for (std::uint32_t b2 : adjacency[i]) {
      xsum[b2] ^= i;
      if (--count[b2] == 1) ready.push_back(b2);
    }
  }
  return resolved_count;
}

std::optional<SymbolVector> rnm_repair(
    std::uint32_t target, std::span<const CodedBlock* const> responders,
    const std::map<std::uint32_t, SymbolVector>& cache) {
  std::vector<const CodedBlock*> ordered(responders.begin(), responders.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CodedBlock* a, const CodedBlock* b) {
                     return a->owner < b->owner;
                   });
  for (const CodedBlock* block : ordered) {
    if (!std::binary_search(block->neighbors.begin(), block->neighbors.end(), target))
      continue;
    bool closable = true;
    for (std::uint32_t h : block->neighbors) {
      if (h != target && cache.find(h) == cache.end()) {
        closable = false;
        break;
      }
    }
    if (!closable) continue;
    SymbolVector out = block->payload;
    for (std::uint32_t h : block->neighbors)
      if (h != target) xor_into(out, cache.at(h));
    return out;
  }
  return std::nullopt;
}

namespace {

// Gauss-Jordan over GF(2) on the blocks peeling could not finish: unknowns
// are the unresolved intermediates, one equation per block with a nonempty
// unresolved neighbor set. Writes every uniquely determined unknown back
// into peel. Throws IntegrityError on an inconsistent system.
void eliminate_residue(std::span<const CodedBlock* const> blocks, PeelResult& peel,
                       std::uint32_t wbar) {
  std::vector<std::uint32_t> column_of(wbar, wbar);
  std::vector<std::uint32_t> index_of;
  for (std::uint32_t i = 0; i < wbar; ++i) {
    if (peel.resolved[i]) continue;
    column_of[i] = static_cast<std::uint32_t>(index_of.size());
    index_of.push_back(i);
  }
  const std::size_t unknowns = index_of.size();
  if (unknowns == 0) return;
  const std::size_t words = (unknowns + 63) / 64;

  std::vector<std::vector<std::uint64_t>> mask;
  std::vector<SymbolVector> rhs;
  for (const CodedBlock* block : blocks) {
    std::vector<std::uint64_t> row(words, 0);
    bool open = false;
    for (std::uint32_t h : block->neighbors) {
      if (peel.resolved[h - 1]) continue;
      const std::uint32_t c = column_of[h - 1];
      row[c / 64] ^= std::uint64_t{1} << (c % 64);
      open = true;
    }
    if (!open) continue;
    SymbolVector residual = block->payload;
    for (std::uint32_t h : block->neighbors)
      if (peel.resolved[h - 1]) xor_into(residual, peel.values[h - 1]);
    mask.push_back(std::move(row));
    rhs.push_back(std::move(residual));
  }

  const auto bit = [&](const std::vector<std::uint64_t>& row, std::size_t c) {
    return (row[c / 64] >> (c % 64)) & 1u;
  };
  std::size_t pivot_rows = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < unknowns && pivot_rows < mask.size(); ++c) {
    std::size_t r = pivot_rows;
    while (r < mask.size() && !bit(mask[r], c)) ++r;
    if (r == mask.size()) continue;
    std::swap(mask[r], mask[pivot_rows]);
    std::swap(rhs[r], rhs[pivot_rows]);
    for (std::size_t r2 = 0; r2 < mask.size(); ++r2) {
      if (r2 == pivot_rows || !bit(mask[r2], c)) continue;
      for (std::size_t wd = 0; wd < words; ++wd) mask[r2][wd] ^= mask[pivot_rows][wd];
      xor_into(rhs[r2], rhs[pivot_rows]);
    }
    pivot_col.push_back(c);
    ++pivot_rows;
  }

  for (std::size_t r = pivot_rows; r < mask.size(); ++r)
    if (!all_zero(rhs[r]))
      throw IntegrityError("full_decode: inconsistent coded blocks");

  for (std::size_t r = 0; r < pivot_rows; ++r) {
    std::uint32_t ones = 0;
    for (std::size_t wd = 0; wd < words; ++wd)
      ones += static_cast<std::uint32_t>(std::popcount(mask[r][wd]));
    if (ones != 1) continue;  // still entangled with a free unknown
    const std::uint32_t i = index_of[pivot_col[r]];
    peel.resolved[i] = 1;
    peel.values[i] = std::move(rhs[r]);
    ++peel.resolved_count;
  }
}

}  // namespace

std::optional<std::vector<SymbolVector>> full_decode(
    std::span<const CodedBlock* const> blocks, const Precode& precode) {
  PeelResult peel = peel_decode(blocks, precode.wbar());
  if (peel.resolved_count < precode.w())
    eliminate_residue(blocks, peel, precode.wbar());
  if (peel.resolved_count < precode.w()) return std::nullopt;
  std::vector<std::uint32_t> indices;
  std::vector<const SymbolVector*> values;
  indices.reserve(precode.w());
  values.reserve(precode.w());
  for (std::uint32_t i = 0; i < precode.wbar() && indices.size() < precode.w(); ++i) {
    if (!peel.resolved[i]) continue;
    indices.push_back(i + 1);
    values.push_back(&peel.values[i]);
  }
  return precode.erasure_decode(indices, values);
}

namespace {

double mc_group_failure(std::uint32_t n, std::uint32_t w, std::uint32_t wbar,
                        std::uint32_t trials, Rng& rng, double c, double delta) {
  const DegreeDistribution dist = build_degree_distribution(wbar, c, delta);
  std::uint32_t failures = 0;
  std::vector<std::vector<std::uint32_t>> sets;
  sets.reserve(n);
  for (std::uint32_t trial = 0; trial < trials; ++trial) {
    sets.clear();
    for (std::uint32_t j = 1; j <= wbar; ++j) sets.push_back({j});
    for (std::uint32_t j = wbar; j < n; ++j) sets.push_back(sample_neighbors(dist, rng));
    if (peel_count(sets, wbar) < w) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

}  // namespace

GroupSize choose_group_size(std::uint32_t n, double rate, double eps_dec,
                            std::uint32_t trials, Rng& rng,
                            std::uint32_t wbar_cap, double c, double delta) {
  if (n <= 2) throw std::invalid_argument("choose_group_size: need more than 2 miners");
  if (!(rate > 0.0) || rate >= 1.0)
    throw std::invalid_argument("choose_group_size: rate must be in (0, 1)");
  if (trials == 0) throw std::invalid_argument("choose_group_size: trials must be positive");

  std::uint32_t hi = n - 1;
  if (wbar_cap > 0) hi = std::min(hi, wbar_cap);
  for (std::uint32_t wbar = hi; wbar >= 3; --wbar) {
    const auto w = static_cast<std::uint32_t>(
        std::ceil(rate * static_cast<double>(wbar)));
    if (w < 2 || w >= wbar) continue;
    const double failure = mc_group_failure(n, w, wbar, trials, rng, c, delta);
    if (failure <= eps_dec) return {w, wbar, false, failure};
  }
  // No candidate met the budget (or the rate admits none): smallest legal
  // group, flagged as degraded so callers can tell the budget was missed.
  const double failure = mc_group_failure(n, 2, 3, trials, rng, c, delta);
  return {2, 3, true, failure};
}

}  // namespace codedchain
