#include "codedchain/reliability.hpp"

#include <cmath>
#include <stdexcept>

namespace codedchain {

namespace {
constexpr double kScoreFloor = 1e-6;
}

ReliabilityTracker::ReliabilityTracker(double beta) : beta_(beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) {
    throw std::invalid_argument("reliability forgetting factor must lie in (0, 1]");
  }
}

void ReliabilityTracker::add_miner(std::uint64_t id, double prior) {
  if (!(prior >= 0.0) || !(prior <= 1.0)) {
    throw std::invalid_argument("reliability prior must lie in [0, 1]");
  }
  if (!scores_.emplace(id, prior).second) {
    throw std::invalid_argument("miner already tracked");
  }
}

void ReliabilityTracker::remove_miner(std::uint64_t id) {
  if (scores_.erase(id) == 0) {
    throw std::out_of_range("miner not tracked");
  }
}

double ReliabilityTracker::reliability(std::uint64_t id) const {
  auto it = scores_.find(id);
  if (it == scores_.end()) {
    throw std::out_of_range("miner not tracked");
  }
  return it->second;
}

void ReliabilityTracker::record_epoch(std::uint64_t id, std::uint32_t correct,
                                      std::uint32_t assigned) {
  auto it = scores_.find(id);
  if (it == scores_.end()) {
    throw std::out_of_range("miner not tracked");
  }
  if (assigned == 0) {
    return;
  }
  if (correct > assigned) {
    throw std::invalid_argument("correct votes exceed assignment count");
  }
  double fraction = static_cast<double>(correct) / static_cast<double>(assigned);
  it->second = (1.0 - beta_) * it->second + beta_ * fraction;
}

double ReliabilityTracker::aggregate() const {
  if (scores_.empty()) {
    throw std::logic_error("aggregate reliability of an empty roster");
  }
  double log_sum = 0.0;
  for (const auto& [id, p] : scores_) {
    (void)id;
    log_sum += std::log(p < kScoreFloor ? kScoreFloor : p);
  }
  return std::exp(log_sum / static_cast<double>(scores_.size()));
}

MinerRequirement required_miners(double aggregate_p, double eps, std::uint32_t n,
                                 double margin) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::invalid_argument("consensus error target must lie in (0, 1)");
  }
  if (n == 0) {
    throw std::invalid_argument("empty roster");
  }
  if (!(aggregate_p >= 0.0) || !(aggregate_p <= 1.0)) {
    throw std::invalid_argument("aggregate reliability must lie in [0, 1]");
  }
  MinerRequirement req;
  if (aggregate_p <= 0.5 + margin) {
    req.count = n;
    req.degraded = true;
    return req;
  }
  double gap = 1.0 - 2.0 * aggregate_p;
  double raw = std::ceil(8.0 * std::log(1.0 / eps) * aggregate_p / (gap * gap));
  if (raw < 1.0) {
    raw = 1.0;
  }
  if (raw > static_cast<double>(n)) {
    raw = static_cast<double>(n);
  }
  req.count = static_cast<std::uint32_t>(raw);
  return req;
}

}  // namespace codedchain
