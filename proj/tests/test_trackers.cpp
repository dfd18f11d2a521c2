#include <doctest.h>

#include <cmath>
#include <vector>

#include "evoflow/trackers.hpp"

using namespace evoflow;

namespace {

Trackers feed(const std::vector<std::uint64_t>& l_seq, TrackerConfig config = {}) {
  Trackers t(std::move(config));
  std::uint64_t step = 0;
  for (auto l : l_seq) t.observe(++step, NullDeath{}, l);
  return t;
}

// n steps whose first `empty` steps keep L empty and the rest keep one element in L.
Trackers empty_then_busy(std::uint64_t n, std::uint64_t empty) {
  Trackers t;
  for (std::uint64_t s = 1; s <= n; ++s) t.observe(s, NullDeath{}, s <= empty ? 0 : 1);
  return t;
}

}  // namespace

TEST_CASE("t_n and k_n examples") {
  const auto t = feed({0, 1, 0, 0});
  CHECK(t.n() == 4);
  CHECK(t.t_n() == 3);
  CHECK(t.k_n() == 1);

  const auto zeros = feed(std::vector<std::uint64_t>(50, 0));
  CHECK(zeros.t_n() == 50);
  CHECK(zeros.k_n() == 0);
  CHECK(zeros.in_progress() == 50);
  CHECK(zeros.empty_stretches().count == 0);
}

TEST_CASE("first nonempty L at step 3 records G_0 = 3") {
  const auto t = feed({0, 0, 1});
  CHECK(t.empty_stretches().count == 1);
  CHECK(t.empty_stretches().sum == 3);
  const auto s = excursion_summary(t);
  CHECK(s.count == 1);
  CHECK(s.mean_g == 3.0);
  CHECK(s.e_count == 0);
  CHECK(s.mean_e == 0.0);
}

TEST_CASE("stretches partition the steps and k_n counts completed E stretches") {
  const auto t = feed({1, 2, 1, 0, 0, 1, 0, 0, 0, 1, 2});
  CHECK(t.partition_holds());
  CHECK(t.k_n() == t.busy_stretches().count);
  CHECK(t.busy_stretches().count == 2);   // lengths 3 and 1
  CHECK(t.busy_stretches().sum == 4);
  CHECK(t.empty_stretches().count == 3);  // lengths 1, 2, 3
  CHECK(t.empty_stretches().sum == 6);
  CHECK(t.in_progress() == 1);
  CHECK(t.t_n() == 5);
  CHECK(t.k_n() <= t.t_n());
  CHECK(t.busy_stretches().survival(1) == doctest::Approx(0.5));
}

TEST_CASE("observe rejects out-of-order steps and impossible jumps") {
  Trackers t;
  t.observe(1, NullDeath{}, 0);
  CHECK_THROWS_AS(t.observe(1, NullDeath{}, 0), UsageError);
  CHECK_THROWS_AS(t.observe(3, NullDeath{}, 0), UsageError);
  CHECK_THROWS_AS(t.observe(2, NullDeath{}, 2), UsageError);
  CHECK_NOTHROW(t.observe(2, NullDeath{}, 1));
}

TEST_CASE("merge: identity, additivity, associativity") {
  const auto a = feed({0, 1, 0, 0});            // t=3, k=1
  const auto b = feed({1, 0, 1, 0, 0, 1, 1, 0});  // t=4, k=3
  const auto c = feed({0, 0, 1, 2});
  const Trackers id;
  CHECK(merge(id, a) == a);
  CHECK(merge(a, id) == a);

  const auto ab = merge(a, b);
  CHECK(ab.t_n() == a.t_n() + b.t_n());
  CHECK(ab.k_n() == a.k_n() + b.k_n());
  CHECK(ab.n() == 12);
  CHECK(ab.partition_holds());
  CHECK(ab.sealed());
  CHECK_THROWS_AS(Trackers(ab).observe(13, NullDeath{}, 0), UsageError);

  CHECK(merge(merge(a, b), c) == merge(a, merge(b, c)));

  TrackerConfig other;
  other.intervals = {{0.6, 0.8}};
  CHECK_THROWS_AS(merge(a, Trackers(other)), ParameterError);
}

TEST_CASE("merge adds (t=3,k=1) and (t=5,k=2) to (t=8,k=3)") {
  const auto x = feed({0, 1, 0, 0});
  const auto y = feed({0, 1, 0, 1, 0, 0, 0});
  REQUIRE(x.t_n() == 3);
  REQUIRE(x.k_n() == 1);
  REQUIRE(y.t_n() == 5);
  REQUIRE(y.k_n() == 2);
  const auto m = merge(x, y);
  CHECK(m.t_n() == 8);
  CHECK(m.k_n() == 3);
}

TEST_CASE("tail bound examples") {
  const ModelParams params(2.0 / 3.0);
  const auto t = empty_then_busy(1'000'000, 1200);
  REQUIRE(t.t_n() == 1200);
  const auto check = tail_bound_check(t, params, 0.1);
  CHECK(check.threshold == doctest::Approx(6.0 * std::pow(10.0, 3.6)));
  CHECK(check.threshold == doctest::Approx(23886.5).epsilon(1e-5));
  CHECK(check.pass);
  CHECK(check.margin == doctest::Approx(1200.0 / check.threshold));
  CHECK(check.margin == doctest::Approx(0.050).epsilon(0.01));

  const auto none = empty_then_busy(100, 0);
  CHECK(tail_bound_check(none, params).pass);
  CHECK(tail_bound_check(none, params).margin == 0.0);

  // t_n = n crosses 6 n^0.6 between 88 and 89.
  CHECK(tail_bound_check(empty_then_busy(88, 88), params).pass);
  for (std::uint64_t n : {90u, 1000u, 100000u}) {
    CHECK_FALSE(tail_bound_check(empty_then_busy(n, n), params).pass);
  }
  CHECK_THROWS_AS(tail_bound_check(none, params, 0.0), ParameterError);
  CHECK_THROWS_AS(tail_bound_check(none, ModelParams(0.5)), ParameterError);
}

TEST_CASE("density targets") {
  CHECK(density_target(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 0.6, 0.8) ==
        doctest::Approx(0.1333333333));
  CHECK(density_target(ModelParams(2.0 / 3.0), FitnessLaw::exponential(1.0), 1.0, 2.0) ==
        doctest::Approx(0.155025).epsilon(1e-5));
}

TEST_CASE("density estimate flags intervals below the critical value") {
  auto chain = new_chain(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 1);
  CHECK_THROWS_AS(density_estimate(chain, 0.6, 0.8), ParameterError);
  for (int i = 0; i < 1000; ++i) chain.step();
  const auto above = density_estimate(chain, 0.6, 0.8);
  CHECK(above.theorem_applies);
  CHECK(above.estimate == doctest::Approx(chain.count_in(0.6, 0.8) / 1000.0));
  CHECK_FALSE(density_estimate(chain, 0.4, 0.8).theorem_applies);
}

TEST_CASE("simulated counters: birth fraction, bracket, running histogram") {
  const ModelParams params(2.0 / 3.0);
  TrackerConfig config;
  config.intervals = {{0.6, 0.8}, {0.5, 1.0}, {0.2, 0.4}};
  config.histogram = HistogramSpec{10, 0.0, 1.0};
  auto chain = new_chain(params, FitnessLaw::uniform(), 2024);
  Trackers t(config);
  for (int block = 0; block < 20; ++block) {
    run(chain, 10000, t);
    REQUIRE(t.partition_holds());
    REQUIRE(t.l_current() == chain.l_size());
    for (std::size_t i = 0; i < 2; ++i) {
      const auto iv = config.intervals[i];
      const auto br = death_bracket(t, i, chain.count_in(iv.a, iv.b));
      REQUIRE(br.holds);
      REQUIRE(br.alive == t.interval_alive(i));
    }
  }
  CHECK(t.births() + t.deaths() + t.null_deaths() == t.n());
  CHECK(chain.population().size() == t.births() - t.deaths());
  CHECK(std::abs(static_cast<double>(t.births()) / 200000.0 - 2.0 / 3.0) < 0.005);
  CHECK(t.k_n() <= t.t_n());
  CHECK(t.histogram()->counts == chain.snapshot_histogram(10, 0.0, 1.0).counts);
}
