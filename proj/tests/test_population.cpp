#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "evoflow/errors.hpp"
#include "evoflow/population.hpp"

using evoflow::Population;

namespace {

// Sorted-vector reference with the same tie order (new equals go last).
struct SortedList {
  std::vector<double> v;
  void insert(double x) { v.insert(std::upper_bound(v.begin(), v.end(), x), x); }
  double remove_min() {
    const double x = v.front();
    v.erase(v.begin());
    return x;
  }
  std::size_t less(double x) const {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  }
  std::size_t less_equal(double x) const {
    return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
  }
};

}  // namespace

TEST_CASE("empty population") {
  Population pop;
  CHECK(pop.empty());
  CHECK(pop.size() == 0);
  CHECK_FALSE(pop.min().has_value());
  CHECK(pop.count_in(0.0, 1.0) == 0);
  CHECK(pop.values().empty());
  CHECK_THROWS_AS(pop.remove_min(), evoflow::UsageError);
  CHECK_NOTHROW(pop.check_invariants());
}

TEST_CASE("count_in examples") {
  Population pop;
  for (double x : {0.3, 0.55, 0.7, 0.9}) pop.insert(x);
  CHECK(pop.count_in(0.5, 0.8) == 2);
  CHECK(pop.count_in(0.55, 0.7) == 0);  // open interval
  CHECK(pop.count_in(0.7, 0.7) == 0);
  CHECK_THROWS_AS(pop.count_in(0.8, 0.5), evoflow::ParameterError);
  CHECK(pop.min() == 0.3);
}

TEST_CASE("NaN is rejected") {
  Population pop;
  CHECK_THROWS_AS(pop.insert(std::nan("")), evoflow::ParameterError);
  CHECK(pop.empty());
}

TEST_CASE("random operations agree with a sorted-list reference") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> grid(0, 500);
  std::bernoulli_distribution coin(0.6);
  Population pop;
  SortedList ref;
  for (int op = 0; op < 40000; ++op) {
    if (coin(rng) || ref.v.empty()) {
      const double x = grid(rng) / 500.0;
      pop.insert(x);
      ref.insert(x);
    } else {
      REQUIRE(pop.remove_min() == ref.remove_min());
    }
    REQUIRE(pop.size() == ref.v.size());
    if (op % 97 == 0) {
      const double x = grid(rng) / 500.0;
      REQUIRE(pop.count_less(x) == ref.less(x));
      REQUIRE(pop.count_less_equal(x) == ref.less_equal(x));
      REQUIRE(pop.multiplicity(x) == ref.less_equal(x) - ref.less(x));
    }
    if (op % 4999 == 0) {
      pop.check_invariants();
      REQUIRE(pop.values() == ref.v);
    }
  }
  pop.check_invariants();
  CHECK(pop.values() == ref.v);
}

TEST_CASE("count_in is additive over adjacent intervals") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Population pop;
  for (int i = 0; i < 5000; ++i) pop.insert(u(rng));
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    CHECK(pop.count_in(a, c) == pop.count_in(a, b) + pop.multiplicity(b) + pop.count_in(b, c));
  }
}

TEST_CASE("ties leave in insertion order") {
  Population pop;
  for (int i = 0; i < 1000; ++i) pop.insert(0.5);
  pop.insert(0.25);
  CHECK(pop.multiplicity(0.5) == 1000);
  CHECK(pop.remove_min() == 0.25);
  for (int i = 0; i < 1000; ++i) CHECK(pop.remove_min() == 0.5);
  CHECK(pop.empty());
}

TEST_CASE("large trees stay shallow and valid through drain and refill") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Population pop;
  for (int i = 0; i < 300000; ++i) pop.insert(u(rng));
  pop.check_invariants();
  CHECK(pop.height() <= 3);
  CHECK(pop.memory_bytes() > 300000 * sizeof(double));
  double prev = -1.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = pop.remove_min();
    REQUIRE(x >= prev);
    prev = x;
  }
  pop.check_invariants();
  CHECK(pop.size() == 100000);
  CHECK(*pop.min() >= prev);
  while (!pop.empty()) pop.remove_min();
  pop.check_invariants();
  CHECK(pop.height() == 0);
  for (int i = 0; i < 1000; ++i) pop.insert(u(rng));
  pop.check_invariants();
  CHECK(pop.size() == 1000);
}

TEST_CASE("copies are deep and compare equal") {
  Population a;
  for (int i = 0; i < 2000; ++i) a.insert(i * 0.001);
  Population b = a;
  CHECK(a == b);
  b.remove_min();
  CHECK_FALSE(a == b);
  CHECK(a.size() == 2000);
  a.clear();
  CHECK(a.empty());
  CHECK(b.size() == 1999);
}
