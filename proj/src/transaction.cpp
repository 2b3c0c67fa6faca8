#include "codedchain/transaction.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

namespace codedchain {

Transaction generate_transaction(std::uint64_t id, std::uint64_t epoch,
                                 std::uint64_t last_height,
                                 std::uint32_t depth_group,
                                 const TxGenParams& params, Rng& rng) {
  if (depth_group > 4)
    throw std::invalid_argument("generate_transaction: depth group must be 0..4");

  Transaction tx;
  tx.id = id;
  tx.submit_epoch = epoch;
  tx.vitality = static_cast<std::uint32_t>(rng.uniform_int(1, 10));
  tx.fee = std::min(rng.exponential(params.fee_scale / tx.vitality), 100.0);
  tx.age = std::clamp(rng.exponential(params.age_scale / tx.vitality), 1.0, 32.0);
  tx.compute_shape = params.compute_shape;
  tx.compute_cost = rng.gamma(params.compute_shape, params.compute_scale);
  tx.size_mean = params.size_mean;
  tx.size_bytes = std::max(1.0, rng.normal(params.size_mean, params.size_std));

  // Five depth strata: the stratum multiplier shrinks the Poisson mean from
  // 0.95 of the chain height down to 0.03 of it.
  tx.depth_mean = static_cast<double>(last_height) *
                  (0.95 - 0.23 * static_cast<double>(depth_group));
  const std::uint64_t depth_draw = rng.poisson(tx.depth_mean);
  if (depth_draw == 0 || last_height == 0) {
    tx.required_height = 0;
  } else {
    // The referenced block must exist: clamp into [1, last_height].
    const std::uint64_t unclamped =
        depth_draw >= epoch ? 1 : epoch - depth_draw;
    tx.required_height = std::clamp<std::uint64_t>(unclamped, 1, last_height);
  }

  tx.ground_truth_valid = rng.bernoulli(params.p_valid);
  tx.payload.resize(params.payload_bytes);
  rng.fill_bytes(std::as_writable_bytes(std::span<std::uint8_t>(tx.payload)));
  return tx;
}

std::uint64_t current_depth(const Transaction& tx, std::uint64_t epoch) {
  if (tx.required_height == 0) return 0;
  return epoch >= tx.required_height ? epoch - tx.required_height : 0;
}

}  // namespace codedchain
