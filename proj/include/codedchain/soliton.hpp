#pragma once

#include <cstdint>
#include <vector>

#include "codedchain/rng.hpp"

namespace codedchain {

// Degree distribution for the outer rateless code: a robust soliton with the
// degree-1 mass removed and redistributed evenly over degrees >= 2, so every
// generated parity block mixes at least two intermediates.
struct DegreeDistribution {
  std::uint32_t wbar = 0;
  double c = 0.0;
  double delta = 0.0;
  double spike_mass = 0.0;          // expected degree-1 count of the base soliton
  std::vector<double> probs;        // probs[L-1] = probability of degree L
  std::vector<double> cdf;          // inclusive prefix sums of probs

  // Samples a degree in [2, wbar].
  std::uint32_t sample(Rng& rng) const;
};

// wbar >= 2, c > 0, delta in (0, 1].
DegreeDistribution build_degree_distribution(std::uint32_t wbar, double c, double delta);

}  // namespace codedchain
