#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "ethf/rng.hpp"

using namespace ethf;

TEST_SUITE("rng") {

TEST_CASE("identical seeds reproduce the full stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(12345), d(12345);
  for (int i = 0; i < 64; ++i) {
    CHECK(c.uniform01() == d.uniform01());
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("different seeds give different streams") {
  Rng a(1), b(2);
  int agree = 0;
  for (int i = 0; i < 32; ++i)
    if (a.next_u64() == b.next_u64()) ++agree;
  CHECK(agree == 0);
}

TEST_CASE("uniform01 stays in [0,1) and uniform_open01 in (0,1]") {
  Rng rng(77);
  for (int i = 0; i < 20000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = rng.uniform_open01();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(std::isfinite(std::log(v)));
  }
}

TEST_CASE("uniform01 moments") {
  Rng rng(901);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    s += u;
    s2 += u * u;
  }
  double mean = s / n;
  double var = s2 / n - mean * mean;
  // SE(mean) = 1/sqrt(12 n)
  CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("uniform_below is in range and roughly uniform") {
  Rng rng(5150);
  const std::uint64_t bound = 7;
  std::vector<int> counts(bound, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t k = rng.uniform_below(bound);
    REQUIRE(k < bound);
    ++counts[k];
  }
  const double expect = double(n) / bound;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / bound));
  for (std::uint64_t k = 0; k < bound; ++k)
    CHECK(std::abs(counts[k] - expect) < 5.0 * sigma);
  CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("normal moments match N(0,1)") {
  Rng rng(333);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = rng.normal();
    s += g;
    s2 += g * g;
    s4 += g * g * g * g;
  }
  double mean = s / n;
  double var = s2 / n;
  double kurt = s4 / n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  // Var(g^2) = 2, so SE of the variance estimate is sqrt(2/n)
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(kurt - 3.0) < 0.1);
}

TEST_CASE("mix produces distinct child seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 4096; ++k) seen.insert(Rng::mix(42, k));
  CHECK(seen.size() == 4096);
  CHECK(Rng::mix(42, 7) != Rng::mix(43, 7));
  CHECK(Rng::mix(42, 7) == Rng::mix(42, 7));
}

TEST_CASE("children of nearby indices are uncorrelated enough to use") {
  // streams seeded by mix(master, k) for consecutive k should not collide
  Rng a(Rng::mix(9, 0)), b(Rng::mix(9, 1));
  int agree = 0;
  for (int i = 0; i < 32; ++i)
    if (a.next_u64() == b.next_u64()) ++agree;
  CHECK(agree == 0);
}

}  // TEST_SUITE
