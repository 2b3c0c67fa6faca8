#include <initializer_list>
#include <cmath>

#include "codedchain/special.hpp"
#include "doctest.h"

using namespace codedchain;

TEST_CASE("regularized gamma reduces to the exponential at shape one") {
  for (double x : {0.0, 0.1, 1.0, 2.5, 10.0, 50.0}) {
    const GammaPQ pq = regularized_gamma(1.0, x);
    CHECK(std::abs(pq.p - (1.0 - std::exp(-x))) < 1e-12);
    CHECK(std::abs(pq.p + pq.q - 1.0) < 1e-12);
  }
}

TEST_CASE("empty integral and domain errors") {
  const GammaPQ pq = regularized_gamma(2.5, 0.0);
  CHECK(pq.p == 0.0);
  CHECK(pq.q == 1.0);
  CHECK_THROWS(regularized_gamma(0.0, 1.0));
  CHECK_THROWS(regularized_gamma(-1.0, 1.0));
  CHECK_THROWS(regularized_gamma(1.0, -0.5));
}

TEST_CASE("pinned lower tail values") {
  // Reference values from an independent numerical library.
  CHECK(std::abs(regularized_gamma(2.5, 2.5).p - 0.584119813004492) < 1e-10);
  // Integer shape has the closed Poisson form: Q(3, 2) = e^-2 (1 + 2 + 2).
  const double q32 = std::exp(-2.0) * (1.0 + 2.0 + 2.0);
  CHECK(std::abs(regularized_gamma(3.0, 2.0).q - q32) < 1e-12);
  // Large-argument continued-fraction branch.
  CHECK(std::abs(regularized_gamma(41.55434608446095, 50.0).p - 0.9) < 1e-9);
}

TEST_CASE("gamma tail is monotone in both arguments") {
  double prev = 1.0;
  for (double a = 1.0; a <= 20.0; a += 0.5) {
    const double p = regularized_gamma(a, 5.0).p;
    CHECK(p < prev);  // increasing shape shifts mass right
    prev = p;
  }
  prev = 0.0;
  for (double x = 0.5; x <= 30.0; x += 0.5) {
    const double p = regularized_gamma(4.0, x).p;
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("normal cdf matches pinned points and symmetry") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.96) - 0.9750021048517795) < 1e-10);
  for (double z : {-3.0, -1.2, -0.1, 0.4, 2.7}) {
    CHECK(std::abs(normal_cdf(z) + normal_cdf(-z) - 1.0) < 1e-12);
  }
  CHECK(normal_cdf(10.0) > 1.0 - 1e-12);
  CHECK(normal_cdf(-10.0) < 1e-12);
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(std::abs(normal_quantile(0.9) - 1.2815515655446004) < 1e-9);
  for (double q = 0.001; q < 1.0; q += 0.0173) {
    CHECK(std::abs(normal_cdf(normal_quantile(q)) - q) <= 1e-9);
  }
  CHECK_THROWS(normal_quantile(0.0));
  CHECK_THROWS(normal_quantile(1.0));
  CHECK_THROWS(normal_quantile(-0.2));
}
