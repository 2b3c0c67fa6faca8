#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace codedchain {

// Per-miner reliability scores maintained by the coordinator: exponential
// averaging of each epoch's vote-accuracy fraction with forgetting factor
// beta. Epochs with no assignments leave a score untouched.
class ReliabilityTracker {
 public:
  explicit ReliabilityTracker(double beta);

  void add_miner(std::uint64_t id, double prior);
  void remove_miner(std::uint64_t id);
  bool contains(std::uint64_t id) const { return scores_.count(id) != 0; }
  double reliability(std::uint64_t id) const;
  std::size_t size() const { return scores_.size(); }

  // p <- (1 - beta) p + beta * correct / assigned; assigned == 0 is a no-op.
  void record_epoch(std::uint64_t id, std::uint32_t correct, std::uint32_t assigned);

  // Geometric mean over all tracked miners, each score clamped to at least
  // 1e-6 so one zero cannot annihilate the aggregate.
  double aggregate() const;

 private:
  double beta_;
  std::map<std::uint64_t, double> scores_;
};

struct MinerRequirement {
  std::uint32_t count = 0;
  bool degraded = false;  // aggregate too close to 1/2 for the bound to hold
};

// Chernoff-style assignment size: ceil(8 ln(1/eps) P / (1-2P)^2) clamped to
// [1, n] when P exceeds 1/2 + margin; otherwise the bound diverges and the
// only safe assignment is every miner, flagged as degraded.
MinerRequirement required_miners(double aggregate_p, double eps, std::uint32_t n,
                                 double margin = 0.01);

}  // namespace codedchain
