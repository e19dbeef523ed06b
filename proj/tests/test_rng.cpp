#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "dtm/parallel.hpp"
#include "dtm/rng.hpp"

using dtm::Rng;

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams differ from each other and the parent") {
  Rng parent(7);
  Rng s0(Rng::derive(7, 0));
  Rng s1(Rng::derive(7, 1));
  int same01 = 0, same0p = 0;
  for (int i = 0; i < 64; ++i) {
    auto v0 = s0.next_u64();
    same01 += v0 == s1.next_u64();
    same0p += v0 == parent.next_u64();
  }
  CHECK(same01 == 0);
  CHECK(same0p == 0);
}

TEST_CASE("uniform01 range and mean") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform_index stays in range and covers all cells") {
  Rng rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto j = rng.uniform_index(7);
    REQUIRE(j < 7);
    ++counts[j];
  }
  for (int c : counts) CHECK(c > 700);  // expectation 1000
}

TEST_CASE("normal has roughly standard moments") {
  Rng rng(99);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sumsq / n - 1.0) < 0.03);
}

TEST_CASE("parallel_for fills every slot once, any thread count") {
  const std::size_t count = 1000;
  for (unsigned threads : {1u, 2u, 5u}) {
    std::vector<std::size_t> slot(count, 0);
    dtm::parallel_for(count, threads, [&](std::size_t i) { slot[i] = i + 1; });
    for (std::size_t i = 0; i < count; ++i) CHECK(slot[i] == i + 1);
  }
}
