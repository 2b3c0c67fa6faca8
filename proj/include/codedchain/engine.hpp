#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "codedchain/block.hpp"
#include "codedchain/lt.hpp"
#include "codedchain/precode.hpp"
#include "codedchain/reliability.hpp"
#include "codedchain/rng.hpp"
#include "codedchain/scenario.hpp"
#include "codedchain/soliton.hpp"
#include "codedchain/transaction.hpp"

namespace codedchain {

enum class MinerBehavior : std::uint8_t { kHonest = 0, kStraggler = 1, kDishonest = 2 };

// One epoch's externally visible outcome; these fields are exactly the
// per-epoch CSV columns.
struct EpochRecord {
  std::uint32_t epoch = 0;
  std::uint32_t miners = 0;             // N(t) after churn
  std::uint32_t selected = 0;           // K(t)
  std::uint32_t confirmed = 0;          // |K_v(t)|, appended rows
  std::uint32_t wrong_confirmed = 0;    // confirmed but truly invalid
  double storage_fraction = 0.0;        // per-miner ledger fraction
  double credit_gini = 0.0;             // inequality of participation credit
  double credit_entropy = 0.0;          // bits
  std::uint32_t backlog = 0;            // pending count at epoch start
  std::uint64_t depth_limit = 0;        // D(t)
  std::uint32_t assignment_size = 0;    // effective per-transaction voters
  double aggregate_reliability = 0.0;   // P(t)
};

struct GroupRecord {
  std::uint32_t index = 0;        // 1-based
  std::uint64_t first_height = 0;
  std::uint32_t w = 0;            // raw blocks collapsed
  std::uint32_t wbar = 0;         // intermediates
  std::uint32_t closed_epoch = 0;
};

// Per-epoch introspection beyond the CSV columns, for tests.
struct EpochDetail {
  std::vector<std::uint64_t> selected_ids;
  std::vector<char> ground_truth;   // aligned with selected_ids
  std::vector<char> accepted;       // stage-2 outcome, aligned
  std::vector<std::uint64_t> confirmed_ids;
  std::uint32_t demoted = 0;        // accepted but no state majority
  std::uint32_t fetch_failures = 0; // honest abstentions from missing data
};

struct BehaviorCounts {
  std::uint32_t honest = 0;
  std::uint32_t straggler = 0;
  std::uint32_t dishonest = 0;
};

// The epoch-sequential simulation: miner churn, transaction generation and
// backlog, reward-driven selection, assignment and voting, block formation,
// reliability updates, and group encoding at boundaries. Deterministic
// given (scenario, scenario.seed); each subsystem draws from its own
// derived stream so one knob cannot shift another's randomness.
class Engine {
 public:
  explicit Engine(const Scenario& scenario);

  EpochRecord run_epoch();
  std::vector<EpochRecord> run();  // scenario.epochs steps

  std::uint32_t epoch() const { return epoch_; }
  std::uint32_t live_miners() const { return static_cast<std::uint32_t>(miners_.size()); }
  std::uint64_t chain_height() const { return chain_.size(); }
  std::size_t backlog_size() const { return backlog_.size(); }
  const std::vector<EpochRecord>& records() const { return records_; }
  const std::vector<GroupRecord>& closed_groups() const { return group_records_; }
  const EpochDetail& last_detail() const { return detail_; }
  BehaviorCounts behavior_counts() const;

  // Straggler silence tallies across all epochs so far.
  std::uint64_t straggler_silent_epochs() const { return straggler_silent_; }
  std::uint64_t straggler_total_epochs() const { return straggler_total_; }

  // The authoritative chain, for test comparison against decoded data.
  const std::vector<std::uint8_t>& chain_block_bytes(std::uint64_t height) const;

  // Runs the honest data path (local / cached / repair / decode) for one
  // height, bypassing the decoded-group memo; nullopt models Unavailable.
  std::optional<Block> fetch_block_for_test(std::uint64_t height);

  // Simulates an abrupt mass leave of the highest-id miners (never below 3
  // survivors) without consuming randomness.
  void remove_miners_for_test(std::uint32_t count);

 private:
  struct MinerState {
    std::uint64_t id = 0;
    MinerBehavior behavior = MinerBehavior::kHonest;
    std::uint32_t join_epoch = 0;
    std::map<std::uint32_t, CodedBlock> group_blocks;  // by group index
  };

  struct GroupState {
    GroupRecord record;
    Precode precode;
    DegreeDistribution dist;
    std::vector<SymbolVector> intermediates;       // backfill source
    std::map<std::uint32_t, SymbolVector> cache;   // shared cached prefix
    std::optional<std::vector<SymbolVector>> decoded;  // memoized raw symbols
    std::map<std::uint32_t, SymbolVector> repaired;    // memoized single repairs
  };

  void init_roster();
  void assign_behavior(MinerState& miner, double draw);
  void add_miner(MinerBehavior behavior);
  void step_population();
  std::uint64_t adjust_depth(const std::vector<Transaction>& batch,
                             std::size_t backlogged_prefix) const;
  void plan_group();
  void maybe_close_group();
  std::uint64_t true_state_digest(const Transaction& tx) const;
  std::uint64_t corrupt_state_digest(const Transaction& tx) const;

  // Locates height h: group index (1-based) and offset, or 0 for open.
  std::pair<std::uint32_t, std::uint32_t> locate(std::uint64_t height) const;
  std::optional<SymbolVector> fetch_symbols(std::uint64_t height,
                                            const std::vector<std::uint64_t>& responders,
                                            bool use_memo);
  std::vector<const CodedBlock*> responder_blocks(
      std::uint32_t group, const std::vector<std::uint64_t>& responders) const;

  Scenario scenario_;
  TxGenParams txgen_params_;

  Rng population_rng_;
  Rng txgen_rng_;
  Rng selection_rng_;
  Rng assignment_rng_;
  Rng votes_rng_;
  Rng encode_rng_;
  Rng salt_rng_;
  Rng groupmc_rng_;

  std::uint32_t epoch_ = 0;
  std::uint64_t next_miner_id_ = 1;
  std::uint64_t next_txn_id_ = 1;
  std::map<std::uint64_t, MinerState> miners_;
  ReliabilityTracker tracker_;

  std::vector<Transaction> backlog_;  // ascending id = submission order
  std::vector<std::vector<std::uint8_t>> chain_;   // serialized blocks
  std::vector<Digest256> chain_digests_;
  std::vector<SymbolVector> open_raws_;            // symbol images since last boundary
  std::vector<GroupState> groups_;
  std::vector<GroupRecord> group_records_;
  std::uint64_t last_boundary_ = 0;                // height of last closed block
  std::uint32_t planned_w_ = 0;
  std::uint32_t planned_wbar_ = 0;

  std::vector<EpochRecord> records_;
  EpochDetail detail_;
  std::uint64_t straggler_silent_ = 0;
  std::uint64_t straggler_total_ = 0;
};

}  // namespace codedchain
