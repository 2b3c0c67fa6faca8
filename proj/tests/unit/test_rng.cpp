#include <cmath>
#include <cstdint>
#include <vector>

#include "codedchain/rng.hpp"
#include "doctest.h"

using namespace codedchain;

TEST_CASE("same seed reproduces the stream exactly") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates streams") {
  const std::uint64_t master = 12345;
  CHECK(derive_seed(master, 1) != derive_seed(master, 2));
  CHECK(derive_seed(master, 1) != derive_seed(master + 1, 1));
  // Consuming from one derived stream never shifts another.
  Rng a(derive_seed(master, 1));
  Rng b1(derive_seed(master, 2));
  for (int i = 0; i < 100; ++i) a.next_u64();
  Rng b2(derive_seed(master, 2));
  for (int i = 0; i < 100; ++i) CHECK(b1.next_u64() == b2.next_u64());
}

TEST_CASE("uniform01 stays inside the open interval") {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_below covers its range uniformly") {
  Rng rng(11);
  std::vector<int> counts(10, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[rng.uniform_below(10)];
  for (int c : counts) {
    CHECK(c > draws / 10 - 600);
    CHECK(c < draws / 10 + 600);
  }
  CHECK_THROWS(rng.uniform_below(0));
}

TEST_CASE("uniform_int is inclusive on both ends") {
  Rng rng(13);
  bool lo_seen = false, hi_seen = false;
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t v = rng.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    lo_seen |= (v == -3);
    hi_seen |= (v == 3);
  }
  CHECK(lo_seen);
  CHECK(hi_seen);
}

TEST_CASE("exponential matches its mean") {
  Rng rng(17);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(5.0);
  CHECK(std::abs(sum / n - 5.0) < 0.05);  // se ~ 5/sqrt(n) ~ 0.011
}

TEST_CASE("normal matches mean and spread") {
  Rng rng(19);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal(10.0, 3.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 10.0) < 0.05);
  CHECK(std::abs(var - 9.0) < 0.2);
}

TEST_CASE("gamma matches shape * scale moments") {
  Rng rng(23);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.gamma(1.5, 42000.0);
    CHECK(v >= 0.0);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 1.5 * 42000.0) / (1.5 * 42000.0) < 0.01);
  CHECK(std::abs(var - 1.5 * 42000.0 * 42000.0) / (1.5 * 42000.0 * 42000.0) < 0.05);
  // Shape below 1 exercises the boost-rejection branch.
  double small = 0.0;
  for (int i = 0; i < n; ++i) small += rng.gamma(0.5, 2.0);
  CHECK(std::abs(small / n - 1.0) < 0.02);
}

TEST_CASE("poisson matches its mean at small and large rates") {
  Rng rng(29);
  const int n = 100000;
  for (double mean : {0.3, 4.0, 40.0}) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
    CHECK(std::abs(sum / n - mean) < 4.0 * std::sqrt(mean / n));
  }
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("fill_bytes fills every byte deterministically") {
  Rng a(31), b(31);
  std::vector<std::byte> x(37), y(37);
  a.fill_bytes(x);
  b.fill_bytes(y);
  CHECK(x == y);
  Rng c(32);
  std::vector<std::byte> z(37);
  c.fill_bytes(z);
  CHECK(x != z);
}
