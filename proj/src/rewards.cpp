#include "codedchain/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace codedchain {

namespace {

double l2_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// softmax(sign * x / ||x||), numerically shifted by the max logit.
std::vector<double> scaled_softmax(const std::vector<double>& x, double sign) {
  const double norm = l2_norm(x);
  if (!(norm > 0.0))
    throw std::invalid_argument("compute_rewards: zero attribute vector");
  std::vector<double> logits(x.size());
  double hi = -1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    logits[i] = sign * x[i] / norm;
    hi = std::max(hi, logits[i]);
  }
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - hi);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

}  // namespace

std::vector<double> compute_rewards(const std::vector<double>& vitality,
                                    const std::vector<double>& age,
                                    const std::vector<double>& fee) {
  const std::size_t n = vitality.size();
  if (n == 0) throw std::invalid_argument("compute_rewards: empty input");
  if (age.size() != n || fee.size() != n)
    throw std::invalid_argument("compute_rewards: length mismatch");

  const std::vector<double> vt = scaled_softmax(vitality, -1.0);
  const std::vector<double> at = scaled_softmax(age, +1.0);

  std::vector<double> rewards(n);
  for (std::size_t j = 0; j < n; ++j) {
    // (1 + vt e^{-f})^{-1/at} evaluated in log space for stability.
    const double w = vt[j] * std::exp(-fee[j]);
    rewards[j] = std::exp(-std::log1p(w) / at[j]);
  }
  return rewards;
}

}  // namespace codedchain
