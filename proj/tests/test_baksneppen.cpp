#include <doctest.h>

#include <set>
#include <vector>

#include "evoflow/baksneppen.hpp"
#include "evoflow/errors.hpp"

using namespace evoflow;
using namespace evoflow::baksneppen;

TEST_CASE("step examples") {
  Ring ring({0.9, 0.1, 0.8, 0.7}, FitnessLaw::uniform(), 1);
  const auto u = ring.step();
  CHECK(u.argmin == 1);
  CHECK(u.replaced == std::array<std::size_t, 3>{0, 1, 2});
  CHECK(ring.fitness()[3] == 0.7);

  Ring tie({0.5, 0.9, 0.5}, FitnessLaw::uniform(), 1);
  const auto t = tie.step();
  CHECK(t.argmin == 0);
  CHECK(t.replaced == std::array<std::size_t, 3>{2, 0, 1});

  CHECK_THROWS_AS(Ring(2, FitnessLaw::uniform(), 1), ParameterError);
}

TEST_CASE("a three-site ring is fully refreshed each update") {
  Ring ring(3, FitnessLaw::uniform(), 9);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> before(ring.fitness().begin(), ring.fitness().end());
    const auto u = ring.step();
    CHECK(std::set<std::size_t>(u.replaced.begin(), u.replaced.end()).size() == 3);
    for (std::size_t s = 0; s < 3; ++s) CHECK(ring.fitness()[s] != before[s]);
  }
}

TEST_CASE("updates touch only the minimum and its neighbours") {
  Ring ring(64, FitnessLaw::uniform(), 3);
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> before(ring.fitness().begin(), ring.fitness().end());
    const auto u = ring.step();
    for (std::size_t s = 0; s < 64; ++s) {
      const bool touched = s == u.replaced[0] || s == u.replaced[1] || s == u.replaced[2];
      if (!touched) REQUIRE(ring.fitness()[s] == before[s]);
    }
    REQUIRE(before[u.argmin] == *std::min_element(before.begin(), before.end()));
  }
  CHECK(ring.updates() == 2000);
}

TEST_CASE("bs_run sampling schedule and determinism") {
  Ring a(16, FitnessLaw::uniform(), 5);
  const auto none = bs_run(a, 100, 100, 1);
  CHECK(none.snapshots() == 0);
  CHECK(none.values.empty());

  Ring b(16, FitnessLaw::uniform(), 5);
  const auto one = bs_run(b, 1000, 0, 1000);
  CHECK(one.snapshots() == 1);
  CHECK(one.values.size() == 16);
  CHECK(one.taken_at == std::vector<std::uint64_t>{1000});

  Ring c(16, FitnessLaw::uniform(), 5);
  const auto many = bs_run(c, 100, 40, 20);
  CHECK(many.taken_at == std::vector<std::uint64_t>{60, 80, 100});

  Ring d1(32, FitnessLaw::uniform(), 77), d2(32, FitnessLaw::uniform(), 77);
  CHECK(bs_run(d1, 5000, 1000, 7) == bs_run(d2, 5000, 1000, 7));
  CHECK(d1 == d2);

  Ring e(16, FitnessLaw::uniform(), 5);
  CHECK_THROWS_AS(bs_run(e, 10, 20, 1), ParameterError);
  CHECK_THROWS_AS(bs_run(e, 10, 0, 0), ParameterError);
}

TEST_CASE("threshold estimator examples") {
  std::vector<double> upper, full;
  for (int i = 0; i < 10000; ++i) {
    const double u = (i + 0.5) / 10000.0;
    upper.push_back(0.6 + 0.4 * u);
    full.push_back(u);
  }
  const auto e1 = bs_threshold_estimate(upper);
  CHECK(e1.moment == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(e1.quantile01 == doctest::Approx(0.604).epsilon(1e-3));
  CHECK(e1.samples == 10000);
  CHECK(bs_threshold_estimate(full).moment == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(bs_threshold_estimate(std::vector<double>(999, 0.5)), ParameterError);

  // exponential samples whose cdf values are uniform on (0.6,1)
  const auto law = FitnessLaw::exponential(1.0);
  std::vector<double> mapped;
  for (double v : upper) mapped.push_back(law.quantile(v));
  CHECK(bs_threshold_estimate(mapped, law).moment == doctest::Approx(law.quantile(0.6)).epsilon(1e-6));
}

TEST_CASE("upper_fit compares the samples above the shifted cut with the conditional law") {
  std::vector<double> upper;
  for (int i = 0; i < 10000; ++i) upper.push_back(0.6 + 0.4 * (i + 0.5) / 10000.0);
  const auto fit = upper_fit(upper, FitnessLaw::uniform(), 0.6);
  CHECK(fit.cut == doctest::Approx(0.65));
  CHECK(fit.count == doctest::Approx(8750).epsilon(0.001));
  CHECK(fit.ks < 0.001);
  const auto skew = upper_fit(upper, FitnessLaw::exponential(1.0), 0.6);
  CHECK(skew.ks > 0.1);
}
