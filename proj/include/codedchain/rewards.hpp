#pragma once

#include <vector>

namespace codedchain {

// Per-transaction reward in (0, 1): a Richards growth curve in the fee,
// shaped by softmax weights over normalized vitality (negated, so high
// vitality lowers the inflection) and age (raising the exponent):
//   r_j = (1 + vt_j * exp(-fee_j))^(-1 / at_j)
// with vt = softmax(-v / ||v||) and at = softmax(a / ||a||).
// All three vectors must share one length n >= 1 and v, a must be nonzero.
std::vector<double> compute_rewards(const std::vector<double>& vitality,
                                    const std::vector<double>& age,
                                    const std::vector<double>& fee);

}  // namespace codedchain
