#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "codedchain/precode.hpp"
#include "codedchain/rng.hpp"
#include "codedchain/soliton.hpp"
#include "codedchain/symbol.hpp"

namespace codedchain {

// Two blocks claimed the same combination of intermediates but carried
// different payloads, or a fully reduced block had nonzero residual.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One miner's stored coded block for one group: the XOR of the intermediate
// codewords listed in neighbors (1-based indices, kept sorted).
struct CodedBlock {
  std::uint64_t owner = 0;
  std::uint32_t group = 0;
  std::vector<std::uint32_t> neighbors;
  SymbolVector payload;

  std::uint32_t degree() const { return static_cast<std::uint32_t>(neighbors.size()); }
};

// Sampled-degree parity block: degree from dist (in [2, wbar]), neighbors
// uniform without replacement, payload = XOR of chosen intermediates.
CodedBlock lt_encode_parity(const std::vector<SymbolVector>& intermediates,
                            const DegreeDistribution& dist, Rng& rng);

// Parity block with the given 1-based neighbor set (used by tests and by
// boundary backfill where the neighbor set is re-sampled by the caller).
CodedBlock lt_block_from_neighbors(const std::vector<SymbolVector>& intermediates,
                                   std::vector<std::uint32_t> neighbors);

// Degree-1 block holding intermediate j (1-based).
CodedBlock systematic_block(const std::vector<SymbolVector>& intermediates,
                            std::uint32_t j);

// Samples a degree and neighbor set only (no payload); used where decode
// feasibility depends only on the graph.
std::vector<std::uint32_t> sample_neighbors(const DegreeDistribution& dist, Rng& rng);

struct PeelResult {
  std::vector<SymbolVector> values;  // values[i] valid iff resolved[i]
  std::vector<char> resolved;        // index i holds intermediate i+1
  std::uint32_t resolved_count = 0;
  bool complete = false;
};

// Belief-propagation peeling: repeatedly take a block whose unresolved
// neighbor count is one, resolve that intermediate, and subtract it from
// every block that references it. Order-insensitive and monotone in the
// input set. Throws IntegrityError on inconsistent inputs.
PeelResult peel_decode(std::span<const CodedBlock* const> blocks, std::uint32_t wbar);

// Graph-only peeling; returns the number of intermediates resolved.
std::uint32_t peel_count(const std::vector<std::vector<std::uint32_t>>& neighbor_sets,
                         std::uint32_t wbar);

// Targeted repair of intermediate `target`: scans responders in ascending
// owner id for a block whose neighbor set contains target and whose other
// neighbors are all in cache; returns the XOR-cancelled intermediate, or
// nullopt when no responder block closes (caller escalates to full_decode).
std::optional<SymbolVector> rnm_repair(
    std::uint32_t target, std::span<const CodedBlock* const> responders,
    const std::map<std::uint32_t, SymbolVector>& cache);

// Peel, complete a stalled peel by elimination over GF(2) on the residual
// system (degree >= 2 collections are decodable this way), then reconstruct
// the w source blocks through the precode from whatever >= w intermediates
// were determined. nullopt when fewer than w are determined.
std::optional<std::vector<SymbolVector>> full_decode(
    std::span<const CodedBlock* const> blocks, const Precode& precode);

struct GroupSize {
  std::uint32_t w = 0;
  std::uint32_t wbar = 0;
  bool warning = false;            // set when no candidate met the budget
  double measured_failure = 0.0;   // Monte Carlo failure estimate at (w, wbar)
};

// Largest wbar < n (optionally capped) whose Monte Carlo group-decode
// failure estimate is within eps_dec, with w = ceil(rate * wbar) and
// n > wbar > w >= 2 enforced. Each trial assembles the blocks a group would
// hold across n miners (wbar degree-1 blocks plus n - wbar sampled parity
// blocks) and requires at least w intermediates to peel. Falls back to
// (w=2, wbar=3) with the warning flag when no candidate qualifies.
GroupSize choose_group_size(std::uint32_t n, double rate, double eps_dec,
                            std::uint32_t trials, Rng& rng,
                            std::uint32_t wbar_cap = 0, double c = 0.15,
                            double delta = 0.5);

}  // namespace codedchain
