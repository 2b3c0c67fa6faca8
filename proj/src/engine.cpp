#include "codedchain/engine.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "codedchain/assignment.hpp"
#include "codedchain/metrics.hpp"
#include "codedchain/rewards.hpp"
#include "codedchain/selection.hpp"
#include "codedchain/votes.hpp"

namespace codedchain {

namespace {

// Subsystem stream indices; fixed so that adding a knob never reshuffles
// another subsystem's randomness.
enum StreamId : std::uint64_t {
  kStreamPopulation = 1,
  kStreamTxGen = 2,
  kStreamSelection = 3,
  kStreamAssignment = 4,
  kStreamVotes = 5,
  kStreamEncode = 6,
  kStreamSalt = 7,
  kStreamGroupMc = 8,
};

constexpr double kStragglerSilenceRate = 1.0 / 3.0;

TxGenParams txgen_from(const Scenario& s) {
  TxGenParams p;
  p.fee_scale = s.fee_scale;
  p.age_scale = s.age_scale;
  p.compute_shape = s.compute_shape;
  p.compute_scale = s.compute_scale;
  p.size_mean = s.size_mean;
  p.size_std = s.size_std;
  p.p_valid = s.p_valid;
  p.payload_bytes = s.payload_bytes;
  return p;
}

std::uint64_t tagged_digest(const char* tag, const Transaction& tx) {
  Sha256 h;
  h.update(tag, std::strlen(tag));
  std::uint8_t id_le[8];
  for (int i = 0; i < 8; ++i) {
    id_le[i] = static_cast<std::uint8_t>(tx.id >> (8 * i));
  }
  h.update(id_le, sizeof(id_le));
  h.update(tx.payload.data(), tx.payload.size());
  return digest_prefix64(h.finalize());
}

}  // namespace

Engine::Engine(const Scenario& scenario)
    : scenario_(scenario),
      txgen_params_(txgen_from(scenario)),
      population_rng_(derive_seed(scenario.seed, kStreamPopulation)),
      txgen_rng_(derive_seed(scenario.seed, kStreamTxGen)),
      selection_rng_(derive_seed(scenario.seed, kStreamSelection)),
      assignment_rng_(derive_seed(scenario.seed, kStreamAssignment)),
      votes_rng_(derive_seed(scenario.seed, kStreamVotes)),
      encode_rng_(derive_seed(scenario.seed, kStreamEncode)),
      salt_rng_(derive_seed(scenario.seed, kStreamSalt)),
      groupmc_rng_(derive_seed(scenario.seed, kStreamGroupMc)),
      tracker_(scenario.beta) {
  validate_scenario(scenario_);
  init_roster();
  plan_group();
}

void Engine::init_roster() {
  const std::uint32_t n = scenario_.n0_miners;
  const auto n_dishonest = static_cast<std::uint32_t>(
      std::llround(scenario_.dishonest_fraction * n));
  // The cap is a ceiling, never exceeded: floor keeps the worst-case
  // composition at or below it even for awkward roster sizes.
  const auto n_straggler =
      static_cast<std::uint32_t>(std::floor(scenario_.straggler_cap * n));
  if (n_dishonest + n_straggler > n) {
    throw std::invalid_argument("behavior fractions exceed the initial roster");
  }
  std::vector<MinerBehavior> labels(n, MinerBehavior::kHonest);
  std::fill_n(labels.begin(), n_dishonest, MinerBehavior::kDishonest);
  std::fill_n(labels.begin() + n_dishonest, n_straggler, MinerBehavior::kStraggler);
  for (std::uint32_t i = n - 1; i > 0; --i) {
    auto j = static_cast<std::uint32_t>(population_rng_.uniform_below(i + 1));
    std::swap(labels[i], labels[j]);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    MinerState miner;
    miner.id = next_miner_id_++;
    miner.behavior = labels[i];
    miner.join_epoch = 0;
    double prior = 0.5 + 0.5 * population_rng_.uniform01();
    tracker_.add_miner(miner.id, prior);
    miners_.emplace(miner.id, std::move(miner));
  }
}

void Engine::add_miner(MinerBehavior behavior) {
  MinerState miner;
  miner.id = next_miner_id_++;
  miner.behavior = behavior;
  miner.join_epoch = epoch_;
  double prior = 0.5 + 0.5 * population_rng_.uniform01();
  tracker_.add_miner(miner.id, prior);
  // A joiner stores one fresh parity block per already-closed group.
  for (auto& group : groups_) {
    CodedBlock cb = lt_encode_parity(group.intermediates, group.dist, encode_rng_);
    cb.owner = miner.id;
    cb.group = group.record.index;
    miner.group_blocks.emplace(group.record.index, std::move(cb));
  }
  miners_.emplace(miner.id, std::move(miner));
}

void Engine::step_population() {
  if (scenario_.lambda_leave > 0.0) {
    auto leaves = population_rng_.poisson(scenario_.lambda_leave);
    std::uint64_t n = miners_.size();
    leaves = std::min<std::uint64_t>(leaves, n > 3 ? n - 3 : 0);
    if (leaves > 0) {
      std::vector<std::uint64_t> roster;
      roster.reserve(miners_.size());
      for (const auto& [id, m] : miners_) roster.push_back(id);
      // Floyd's sample of `leaves` distinct roster positions.
      std::vector<char> picked(roster.size(), 0);
      std::vector<std::uint64_t> leaving;
      for (std::uint64_t j = roster.size() - leaves; j < roster.size(); ++j) {
        std::uint64_t t = population_rng_.uniform_below(j + 1);
        std::uint64_t pick = picked[t] ? j : t;
        picked[pick] = 1;
        leaving.push_back(roster[pick]);
      }
      for (std::uint64_t id : leaving) {
        miners_.erase(id);
        tracker_.remove_miner(id);
      }
    }
  }
  if (scenario_.lambda_join > 0.0) {
    auto joins = population_rng_.poisson(scenario_.lambda_join);
    for (std::uint64_t i = 0; i < joins; ++i) {
      double u = population_rng_.uniform01();
      MinerBehavior behavior = MinerBehavior::kHonest;
      if (u < scenario_.dishonest_fraction) {
        behavior = MinerBehavior::kDishonest;
      } else {
        // Straggler mass tops the population back up to the cap and no
        // further: probability (cap - fraction)+ / (1 - fraction).
        std::uint64_t stragglers = 0;
        for (const auto& [id, m] : miners_) {
          stragglers += m.behavior == MinerBehavior::kStraggler ? 1 : 0;
        }
        double fraction =
            static_cast<double>(stragglers) / static_cast<double>(miners_.size());
        double fill = fraction < 1.0 ? std::max(0.0, scenario_.straggler_cap - fraction) /
                                           (1.0 - fraction)
                                     : 0.0;
        double u2 = population_rng_.uniform01();
        if (u2 < fill &&
            static_cast<double>(stragglers + 1) <=
                scenario_.straggler_cap * static_cast<double>(miners_.size() + 1)) {
          behavior = MinerBehavior::kStraggler;
        }
      }
      add_miner(behavior);
    }
  }
}

void Engine::plan_group() {
  GroupSize plan = choose_group_size(
      live_miners(), scenario_.precode_rate, scenario_.eps_dec, scenario_.mc_trials,
      groupmc_rng_, scenario_.max_group_wbar, scenario_.soliton_c,
      scenario_.soliton_delta);
  planned_w_ = plan.w;
  planned_wbar_ = plan.wbar;
}

void Engine::maybe_close_group() {
  const auto accumulated = static_cast<std::uint32_t>(chain_.size() - last_boundary_);
  if (accumulated < planned_w_) {
    return;
  }
  // A deferred boundary keeps collecting raw blocks, so the intermediate
  // count must grow with it to preserve the planned redundancy ratio.
  const auto wbar_needed = std::max(
      planned_wbar_,
      static_cast<std::uint32_t>((static_cast<std::uint64_t>(accumulated) *
                                      planned_wbar_ +
                                  planned_w_ - 1) /
                                 planned_w_));
  if (miners_.size() <= wbar_needed) {
    return;  // deferred; retried next epoch against the grown roster
  }

  GroupState group{
      GroupRecord{static_cast<std::uint32_t>(groups_.size() + 1),
                  last_boundary_ + 1, accumulated, wbar_needed, epoch_},
      Precode(scenario_.gf_bits, accumulated, wbar_needed),
      build_degree_distribution(wbar_needed, scenario_.soliton_c,
                                scenario_.soliton_delta),
      {},
      {},
      std::nullopt,
      {}};
  group.intermediates = group.precode.encode(open_raws_);
  const std::uint32_t cached =
      std::min<std::uint32_t>(scenario_.cache_budget, wbar_needed);
  for (std::uint32_t j = 1; j <= cached; ++j) {
    group.cache.emplace(j, group.intermediates[j - 1]);
  }

  std::uint32_t rank = 0;
  for (auto& [id, miner] : miners_) {
    CodedBlock cb;
    if (rank < wbar_needed) {
      cb = systematic_block(group.intermediates, rank + 1);
    } else {
      cb = lt_encode_parity(group.intermediates, group.dist, encode_rng_);
    }
    cb.owner = id;
    cb.group = group.record.index;
    miner.group_blocks.emplace(group.record.index, std::move(cb));
    ++rank;
  }

  group_records_.push_back(group.record);
  groups_.push_back(std::move(group));
  open_raws_.clear();  // every miner erases the raw blocks of the closed group
  last_boundary_ = chain_.size();
  plan_group();
}

std::uint64_t Engine::adjust_depth(const std::vector<Transaction>& batch,
                                   std::size_t backlogged_prefix) const {
  std::vector<std::uint64_t> candidates;
  candidates.reserve(group_records_.size() + 1);
  for (auto it = group_records_.rbegin(); it != group_records_.rend(); ++it) {
    // Boundary heights, nearest first: last_boundary_, then older ones.
    candidates.push_back(epoch_ - (it->first_height + it->w - 1));
  }
  candidates.push_back(epoch_);  // full history
  for (std::uint64_t d : candidates) {
    std::size_t blocked = 0;
    for (std::size_t i = 0; i < backlogged_prefix; ++i) {
      blocked += current_depth(batch[i], epoch_) > d ? 1 : 0;
    }
    if (2 * blocked < batch.size()) {
      return d;
    }
  }
  return epoch_;
}

std::pair<std::uint32_t, std::uint32_t> Engine::locate(std::uint64_t height) const {
  if (height == 0 || height > chain_.size()) {
    throw std::out_of_range("height outside the chain");
  }
  if (height > last_boundary_) {
    return {0, static_cast<std::uint32_t>(height - last_boundary_)};
  }
  auto it = std::upper_bound(group_records_.begin(), group_records_.end(), height,
                             [](std::uint64_t h, const GroupRecord& g) {
                               return h < g.first_height;
                             });
  const GroupRecord& record = *std::prev(it);
  return {record.index, static_cast<std::uint32_t>(height - record.first_height + 1)};
}

std::vector<const CodedBlock*> Engine::responder_blocks(
    std::uint32_t group, const std::vector<std::uint64_t>& responders) const {
  std::vector<const CodedBlock*> blocks;
  blocks.reserve(responders.size());
  for (std::uint64_t id : responders) {
    const auto& miner = miners_.at(id);
    auto it = miner.group_blocks.find(group);
    if (it != miner.group_blocks.end()) {
      blocks.push_back(&it->second);
    }
  }
  return blocks;
}

std::optional<SymbolVector> Engine::fetch_symbols(
    std::uint64_t height, const std::vector<std::uint64_t>& responders,
    bool use_memo) {
  auto [group_index, offset] = locate(height);
  if (group_index == 0) {
    return open_raws_[offset - 1];  // open group: served locally
  }
  GroupState& group = groups_[group_index - 1];
  if (auto it = group.cache.find(offset); it != group.cache.end()) {
    return it->second;
  }
  if (use_memo) {
    if (group.decoded) {
      return (*group.decoded)[offset - 1];
    }
    if (auto it = group.repaired.find(offset); it != group.repaired.end()) {
      return it->second;
    }
  }
  auto blocks = responder_blocks(group_index, responders);
  std::span<const CodedBlock* const> all(blocks.data(), blocks.size());
  if (auto repaired = rnm_repair(offset, all, group.cache)) {
    if (use_memo) {
      group.repaired.emplace(offset, *repaired);
    }
    return repaired;
  }
  // Full decode, trying a prefix first: peeling is monotone in the input
  // set, so a prefix success is always consistent with the full set.
  std::optional<std::vector<SymbolVector>> decoded;
  const std::size_t prefix = std::min<std::size_t>(blocks.size(), 2ull * group.record.wbar);
  if (prefix < blocks.size()) {
    decoded = full_decode(all.first(prefix), group.precode);
  }
  if (!decoded) {
    decoded = full_decode(all, group.precode);
  }
  if (!decoded) {
    return std::nullopt;
  }
  SymbolVector result = (*decoded)[offset - 1];
  if (use_memo) {
    group.decoded = std::move(decoded);
  }
  return result;
}

std::uint64_t Engine::true_state_digest(const Transaction& tx) const {
  return tagged_digest("txstate", tx);
}

std::uint64_t Engine::corrupt_state_digest(const Transaction& tx) const {
  return tagged_digest("txfork", tx);
}

const std::vector<std::uint8_t>& Engine::chain_block_bytes(std::uint64_t height) const {
  if (height == 0 || height > chain_.size()) {
    throw std::out_of_range("height outside the chain");
  }
  return chain_[height - 1];
}

std::optional<Block> Engine::fetch_block_for_test(std::uint64_t height) {
  std::vector<std::uint64_t> responders;
  for (const auto& [id, miner] : miners_) {
    if (miner.behavior != MinerBehavior::kDishonest) {
      responders.push_back(id);
    }
  }
  auto symbols = fetch_symbols(height, responders, /*use_memo=*/false);
  if (!symbols) {
    return std::nullopt;
  }
  auto bytes = symbols_to_bytes(*symbols, scenario_.gf_bits);
  return deserialize_block(bytes);
}

void Engine::remove_miners_for_test(std::uint32_t count) {
  while (count > 0 && miners_.size() > 3) {
    auto last = std::prev(miners_.end());
    tracker_.remove_miner(last->first);
    miners_.erase(last);
    --count;
  }
}

BehaviorCounts Engine::behavior_counts() const {
  BehaviorCounts counts;
  for (const auto& [id, miner] : miners_) {
    switch (miner.behavior) {
      case MinerBehavior::kHonest: ++counts.honest; break;
      case MinerBehavior::kStraggler: ++counts.straggler; break;
      case MinerBehavior::kDishonest: ++counts.dishonest; break;
    }
  }
  return counts;
}

EpochRecord Engine::run_epoch() {
  ++epoch_;
  step_population();

  const auto n_live = static_cast<std::uint32_t>(miners_.size());
  std::vector<std::uint64_t> roster;
  roster.reserve(n_live);
  for (const auto& [id, miner] : miners_) roster.push_back(id);

  // Stage 1a: batch assembly, oldest backlog first, topped up with fresh
  // submissions against the current chain height.
  const auto upsilon = static_cast<std::uint32_t>(backlog_.size());
  const std::uint32_t n_batch = scenario_.batch_size;
  const std::size_t take = std::min<std::size_t>(upsilon, n_batch);
  std::vector<Transaction> batch;
  batch.reserve(n_batch);
  std::move(backlog_.begin(), backlog_.begin() + static_cast<std::ptrdiff_t>(take),
            std::back_inserter(batch));
  backlog_.erase(backlog_.begin(), backlog_.begin() + static_cast<std::ptrdiff_t>(take));
  const std::uint64_t height_before = chain_.size();
  for (std::size_t i = take; i < n_batch; ++i) {
    Transaction tx = generate_transaction(
        next_txn_id_, epoch_, height_before,
        static_cast<std::uint32_t>(next_txn_id_ % 5), txgen_params_, txgen_rng_);
    ++next_txn_id_;
    batch.push_back(std::move(tx));
  }
  const std::size_t fresh = n_batch - take;

  // Stage 1b: dependency-depth window for this epoch.
  const std::uint64_t depth_limit = adjust_depth(batch, take);

  // Stage 1c: rewards and budgeted selection.
  std::vector<double> vitality(n_batch), age(n_batch), fee(n_batch);
  for (std::size_t j = 0; j < n_batch; ++j) {
    vitality[j] = batch[j].vitality;
    age[j] = batch[j].age;
    fee[j] = batch[j].fee;
  }
  const std::vector<double> rewards = compute_rewards(vitality, age, fee);

  SelectionProblem problem;
  problem.mode = scenario_.selection_mode;
  problem.compute_budget = scenario_.compute_budget;
  problem.size_budget = scenario_.size_budget;
  problem.depth_limit = depth_limit;
  problem.q1 = scenario_.q1;
  problem.q2 = scenario_.q2;
  problem.q3 = scenario_.q3;
  problem.compute_scale = scenario_.compute_scale;
  problem.size_omega = scenario_.size_std * scenario_.size_std / scenario_.size_mean;
  SelectionResult selection =
      select_transactions(problem, batch, rewards, epoch_, scenario_.rounding_trials,
                          selection_rng_);

  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < n_batch; ++j) {
    if (selection.chosen[j]) {
      selected.push_back(j);
    }
  }

  // The serialized block must fit one symbol image; shed lowest-reward
  // transactions if the row capacity would overflow (S normally prevents
  // this; payload framing can still exceed it for tiny block_bytes).
  const std::size_t capacity_bytes = scenario_.block_bytes - 4;
  while (!selected.empty() &&
         serialized_block_size(selected.size(), scenario_.payload_bytes) >
             capacity_bytes) {
    std::size_t worst = 0;
    for (std::size_t k = 1; k < selected.size(); ++k) {
      if (rewards[selected[k]] < rewards[selected[worst]] ||
          (rewards[selected[k]] == rewards[selected[worst]] &&
           selected[k] > selected[worst])) {
        worst = k;
      }
    }
    selected.erase(selected.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  const auto k_selected = static_cast<std::uint32_t>(selected.size());

  // Stage 2a: assignment sizing from the reliability aggregate.
  const double aggregate_p = tracker_.aggregate();
  const MinerRequirement requirement =
      required_miners(aggregate_p, scenario_.epsilon, n_live, scenario_.margin);
  const std::uint32_t m_effective = std::min(requirement.count, n_live);

  AssignmentPlan plan = assign_miners(k_selected, m_effective, roster, assignment_rng_);

  // Per-miner assignment lists (roster positions -> selected indices).
  std::vector<std::vector<std::uint32_t>> assigned_txns(n_live);
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    for (std::uint64_t id : plan.members[i]) {
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(roster.begin(), roster.end(), id) - roster.begin());
      assigned_txns[pos].push_back(i);
    }
  }

  // Stage 2b: straggler activity coins for this epoch, in id order.
  std::vector<char> silent(n_live, 0);
  for (std::size_t pos = 0; pos < n_live; ++pos) {
    const MinerState& miner = miners_.at(roster[pos]);
    if (miner.behavior == MinerBehavior::kStraggler) {
      ++straggler_total_;
      if (votes_rng_.bernoulli(kStragglerSilenceRate)) {
        silent[pos] = 1;
        ++straggler_silent_;
      }
    }
  }

  std::vector<std::uint64_t> responders;
  responders.reserve(n_live);
  for (std::size_t pos = 0; pos < n_live; ++pos) {
    const MinerState& miner = miners_.at(roster[pos]);
    if (miner.behavior != MinerBehavior::kDishonest && !silent[pos]) {
      responders.push_back(roster[pos]);
    }
  }

  // Stage 2c: voting. Honest voters validate against fetched data and
  // abstain when it is unavailable; dishonest voters negate ground truth.
  std::vector<std::uint32_t> accepts_honest(k_selected, 0);
  std::vector<std::uint32_t> accepts_dishonest(k_selected, 0);
  std::vector<std::vector<Vote>> cast(n_live);
  std::uint32_t fetch_failures = 0;
  for (std::size_t pos = 0; pos < n_live; ++pos) {
    const auto& assigned = assigned_txns[pos];
    if (assigned.empty()) {
      continue;
    }
    const MinerState& miner = miners_.at(roster[pos]);
    if (miner.behavior == MinerBehavior::kStraggler && silent[pos]) {
      continue;  // no ballot this epoch
    }
    auto& votes = cast[pos];
    votes.reserve(assigned.size());
    std::vector<std::pair<std::uint64_t, Vote>> ballot;
    ballot.reserve(assigned.size());
    for (std::uint32_t i : assigned) {
      const Transaction& tx = batch[selected[i]];
      Vote vote;
      if (miner.behavior == MinerBehavior::kDishonest) {
        vote = tx.ground_truth_valid ? Vote::kReject : Vote::kAccept;
      } else if (tx.required_height != 0 &&
                 !fetch_symbols(tx.required_height, responders, /*use_memo=*/true)) {
        vote = Vote::kAbstain;
        ++fetch_failures;
      } else {
        vote = tx.ground_truth_valid ? Vote::kAccept : Vote::kReject;
      }
      votes.push_back(vote);
      ballot.emplace_back(tx.id, vote);
      if (vote == Vote::kAccept) {
        if (miner.behavior == MinerBehavior::kDishonest) {
          ++accepts_dishonest[i];
        } else {
          ++accepts_honest[i];
        }
      }
    }
    VoteRecord record;
    record.miner = roster[pos];
    record.epoch = epoch_;
    record.votes = std::move(ballot);
    salt_rng_.fill_bytes(std::as_writable_bytes(std::span<std::uint8_t>(record.salt)));
    record.commitment = commit_vote(record.epoch, record.miner, record.votes, record.salt);
    if (!reveal_matches(record)) {
      throw std::logic_error("vote commitment failed to verify");
    }
  }

  // Stage 2d: per-transaction accept consensus.
  std::vector<char> accepted(k_selected, 0);
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    accepted[i] = majority_accepts(accepts_honest[i] + accepts_dishonest[i],
                                   m_effective)
                      ? 1
                      : 0;
  }

  // Stage 3: state consensus over accepted transactions. Honest accepters
  // propose the true state digest, dishonest accepters one fixed corrupt
  // digest; a strict majority of the assigned set must agree byte-for-byte.
  std::vector<char> confirmed(k_selected, 0);
  std::uint32_t demoted = 0;
  Block block;
  block.height = epoch_;
  if (!chain_digests_.empty()) {
    block.parent = chain_digests_.back();
  }
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    if (!accepted[i]) {
      continue;
    }
    const Transaction& tx = batch[selected[i]];
    std::uint64_t state = 0;
    if (2ull * accepts_honest[i] > m_effective) {
      state = true_state_digest(tx);
    } else if (2ull * accepts_dishonest[i] > m_effective) {
      state = corrupt_state_digest(tx);
    } else {
      ++demoted;
      continue;
    }
    confirmed[i] = 1;
    block.rows.push_back(BlockRow{tx.id, tx.payload, state});
  }

  std::uint32_t confirmed_count = 0;
  std::uint32_t wrong_confirmed = 0;
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    if (confirmed[i]) {
      ++confirmed_count;
      wrong_confirmed += batch[selected[i]].ground_truth_valid ? 0 : 1;
    }
  }

  // Stage 4a: append the block.
  auto bytes = serialize_block(block);
  chain_digests_.push_back(sha256(bytes.data(), bytes.size()));
  open_raws_.push_back(
      bytes_to_symbols(bytes, scenario_.symbols_per_block(), scenario_.gf_bits));
  chain_.push_back(std::move(bytes));

  // Reliability: correctness is agreement with the consensus outcome;
  // abstentions and silence count against the miner.
  for (std::size_t pos = 0; pos < n_live; ++pos) {
    const auto& assigned = assigned_txns[pos];
    if (assigned.empty()) {
      continue;
    }
    std::uint32_t correct = 0;
    if (!cast[pos].empty()) {
      for (std::size_t k = 0; k < assigned.size(); ++k) {
        const Vote vote = cast[pos][k];
        const bool vote_accept = vote == Vote::kAccept;
        if (vote != Vote::kAbstain && vote_accept == (accepted[assigned[k]] != 0)) {
          ++correct;
        }
      }
    }
    tracker_.record_epoch(roster[pos], correct,
                          static_cast<std::uint32_t>(assigned.size()));
  }

  // Participation credit: confirmed transaction, assigned, voted accept.
  std::vector<double> credits(n_live, 0.0);
  for (std::size_t pos = 0; pos < n_live; ++pos) {
    const auto& assigned = assigned_txns[pos];
    if (assigned.empty() || cast[pos].empty()) {
      continue;
    }
    for (std::size_t k = 0; k < assigned.size(); ++k) {
      if (confirmed[assigned[k]] && cast[pos][k] == Vote::kAccept) {
        credits[pos] += 1.0;
      }
    }
  }

  // Stage 4b: group boundary.
  maybe_close_group();

  // Metrics snapshot.
  std::vector<std::uint32_t> closed_sizes;
  closed_sizes.reserve(group_records_.size());
  for (const auto& g : group_records_) closed_sizes.push_back(g.w);

  EpochRecord record;
  record.epoch = epoch_;
  record.miners = n_live;
  record.selected = k_selected;
  record.confirmed = confirmed_count;
  record.wrong_confirmed = wrong_confirmed;
  record.storage_fraction = storage_fraction(chain_.size(), closed_sizes);
  record.credit_gini = gini(credits);
  record.credit_entropy = entropy_bits(credits);
  record.backlog = upsilon;
  record.depth_limit = depth_limit;
  record.assignment_size = m_effective;
  record.aggregate_reliability = aggregate_p;

  // Epoch detail for tests, captured before the batch is dismantled.
  detail_.selected_ids.clear();
  detail_.ground_truth.clear();
  detail_.confirmed_ids.clear();
  detail_.accepted.assign(accepted.begin(), accepted.end());
  detail_.demoted = demoted;
  detail_.fetch_failures = fetch_failures;
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    const Transaction& tx = batch[selected[i]];
    detail_.selected_ids.push_back(tx.id);
    detail_.ground_truth.push_back(tx.ground_truth_valid ? 1 : 0);
    if (confirmed[i]) {
      detail_.confirmed_ids.push_back(tx.id);
    }
  }

  // Backlog reassembly: unselected and demoted transactions persist with
  // their attributes, one epoch older; rejected ones leave the system.
  std::vector<Transaction> returning;
  returning.reserve(n_batch);
  std::uint32_t rejected = 0;
  std::vector<char> chosen_flag(n_batch, 0);
  for (std::uint32_t i = 0; i < k_selected; ++i) {
    chosen_flag[selected[i]] = 1;
  }
  std::size_t sel_cursor = 0;
  for (std::size_t j = 0; j < n_batch; ++j) {
    if (!chosen_flag[j]) {
      batch[j].age += 1.0;
      returning.push_back(std::move(batch[j]));
      continue;
    }
    const std::uint32_t i = static_cast<std::uint32_t>(sel_cursor++);
    if (confirmed[i]) {
      continue;  // appended
    }
    if (accepted[i]) {
      batch[j].age += 1.0;  // demoted: back to the pool
      returning.push_back(std::move(batch[j]));
    } else {
      ++rejected;  // consensus-invalid: dropped for good
    }
  }
  std::vector<Transaction> merged;
  merged.reserve(returning.size() + backlog_.size());
  std::merge(std::make_move_iterator(returning.begin()),
             std::make_move_iterator(returning.end()),
             std::make_move_iterator(backlog_.begin()),
             std::make_move_iterator(backlog_.end()), std::back_inserter(merged),
             [](const Transaction& a, const Transaction& b) { return a.id < b.id; });
  backlog_ = std::move(merged);
  if (backlog_.size() != upsilon + fresh - confirmed_count - rejected) {
    throw std::logic_error("transaction conservation violated");
  }

  records_.push_back(record);
  return record;
}

std::vector<EpochRecord> Engine::run() {
  while (epoch_ < scenario_.epochs) {
    run_epoch();
  }
  return records_;
}

}  // namespace codedchain
