#include <set>
#include <vector>

#include "doctest.h"
#include "setpredict/rng.hpp"

using namespace setpredict;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("split streams are independent of parent draws") {
  Rng parent(7);
  Rng child_before = parent.split("stream");
  parent.next_u64();
  parent.next_u64();
  Rng child_after = parent.split("stream");
  for (int i = 0; i < 20; ++i) CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("differently named splits differ") {
  Rng parent(7);
  Rng a = parent.split("a");
  Rng b = parent.split("b");
  CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and uniform_int in range") {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.uniform_int(7) < 7);
  }
}

TEST_CASE("normal moments are sane") {
  Rng rng(11);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}
