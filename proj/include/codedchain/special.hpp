#pragma once

namespace codedchain {

struct GammaPQ {
  double p;  // lower regularized incomplete gamma P(a, x)
  double q;  // upper tail Q(a, x) = 1 - P(a, x)
};

// a > 0, x >= 0. Series expansion for x < a + 1, Lentz continued fraction
// otherwise; the complementary value is formed by subtraction so P + Q = 1
// to machine precision.
GammaPQ regularized_gamma(double a, double x);

// Standard normal CDF, via erfc.
double normal_cdf(double z);

// Inverse standard normal CDF on (0, 1); rational approximation polished
// with one Halley step against normal_cdf.
double normal_quantile(double q);

}  // namespace codedchain
