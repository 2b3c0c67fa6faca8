#pragma once

#include <cstdint>
#include <vector>

#include "codedchain/rng.hpp"

namespace codedchain {

struct Transaction {
  std::uint64_t id = 0;
  std::uint32_t vitality = 1;       // 1..10
  double age = 1.0;                 // epochs; grows while backlogged
  double fee = 0.0;                 // value units, truncated to [0, 100]
  double compute_shape = 0.0;       // gamma shape of the compute-cost model
  double compute_cost = 0.0;        // realized compute cost
  double size_mean = 0.0;           // mean of the size model, bytes
  double size_bytes = 0.0;          // realized serialized size
  double depth_mean = 0.0;          // Poisson mean of the dependency depth
  std::uint64_t required_height = 0;  // oldest block needed; 0 = none
  bool ground_truth_valid = true;
  std::uint64_t submit_epoch = 0;
  std::vector<std::uint8_t> payload;
};

struct TxGenParams {
  double fee_scale = 20.0;     // fee mean = fee_scale / vitality
  double age_scale = 6.0;      // age mean = age_scale / vitality
  double compute_shape = 1.5;  // gamma shape
  double compute_scale = 42000.0;
  double size_mean = 3000.0;
  double size_std = 1000.0;
  double p_valid = 0.9;
  std::uint32_t payload_bytes = 16;
};

// One freshly submitted transaction. depth_group (0..4) stripes the Poisson
// depth mean across the batch; last_height is the chain height before this
// epoch, which scales the depth model and anchors required_height.
Transaction generate_transaction(std::uint64_t id, std::uint64_t epoch,
                                 std::uint64_t last_height,
                                 std::uint32_t depth_group,
                                 const TxGenParams& params, Rng& rng);

// Dependency depth of tx as seen at epoch t (0 when independent).
std::uint64_t current_depth(const Transaction& tx, std::uint64_t epoch);

}  // namespace codedchain
