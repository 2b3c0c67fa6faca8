#include "codedchain/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codedchain {

DegreeDistribution build_degree_distribution(std::uint32_t wbar, double c,
                                             double delta) {
  if (wbar < 2) throw std::invalid_argument("degree distribution: wbar must be >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("degree distribution: c must be positive");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("degree distribution: delta must be in (0, 1]");

  const double w = static_cast<double>(wbar);
  const double spike = c * std::sqrt(w) * std::log(w / delta);

  // Ideal soliton rho.
  std::vector<double> rho(wbar, 0.0);
  rho[0] = 1.0 / w;
  for (std::uint32_t i = 2; i <= wbar; ++i)
    rho[i - 1] = 1.0 / (static_cast<double>(i) * (i - 1.0));

  // Robust correction tau with its spike at round(wbar / spike).
  std::vector<double> tau(wbar, 0.0);
  std::uint32_t k0 = static_cast<std::uint32_t>(std::llround(w / spike));
  k0 = std::clamp<std::uint32_t>(k0, 1, wbar);
  for (std::uint32_t i = 1; i < k0; ++i) tau[i - 1] = spike / (static_cast<double>(i) * w);
  tau[k0 - 1] = std::max(0.0, spike * std::log(spike / delta) / w);

  double beta = 0.0;
  for (std::uint32_t i = 0; i < wbar; ++i) beta += rho[i] + tau[i];

  std::vector<double> mu(wbar);
  for (std::uint32_t i = 0; i < wbar; ++i) mu[i] = (rho[i] + tau[i]) / beta;

  // Remove the degree-1 mass and spread it evenly over degrees >= 2.
  DegreeDistribution dist;
  dist.wbar = wbar;
  dist.c = c;
  dist.delta = delta;
  dist.spike_mass = spike;
  dist.probs.assign(wbar, 0.0);
  const double shift = mu[0] / (w - 1.0);
  for (std::uint32_t i = 2; i <= wbar; ++i) dist.probs[i - 1] = mu[i - 1] + shift;

  dist.cdf.resize(wbar);
  double acc = 0.0;
  for (std::uint32_t i = 0; i < wbar; ++i) {
    acc += dist.probs[i];
    dist.cdf[i] = acc;
  }
  dist.cdf.back() = 1.0;  // guard against accumulated rounding
  return dist;
}

std::uint32_t DegreeDistribution::sample(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  std::uint32_t degree =
      static_cast<std::uint32_t>(std::distance(cdf.begin(), it)) + 1;
  return std::clamp<std::uint32_t>(degree, 2, wbar);
}

}  // namespace codedchain
