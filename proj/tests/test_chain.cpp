#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "evoflow/chain.hpp"

using namespace evoflow;

namespace {

struct Recorder {
  std::vector<StepEvent> events;
  std::vector<std::size_t> l_after;
  std::uint64_t last = 0;
  void observe(std::uint64_t n, const StepEvent& e, std::size_t l) {
    CHECK(n == last + 1);
    last = n;
    events.push_back(e);
    l_after.push_back(l);
  }
};

BasicChain<ScriptedUniforms> scripted(double p, std::vector<double> draws) {
  return BasicChain<ScriptedUniforms>(ModelParams(p), FitnessLaw::uniform(),
                                      ScriptedUniforms(std::move(draws)));
}

// Fills a scripted chain with the given fitness values via forced births.
BasicChain<ScriptedUniforms> seeded(double p, const std::vector<double>& values,
                                    std::vector<double> tail) {
  std::vector<double> draws;
  for (double v : values) {
    draws.push_back(0.0);
    draws.push_back(v);
  }
  draws.insert(draws.end(), tail.begin(), tail.end());
  auto chain = scripted(p, draws);
  for (std::size_t i = 0; i < values.size(); ++i) chain.step();
  return chain;
}

}  // namespace

TEST_CASE("new chain is empty at n = 0") {
  const auto chain = new_chain(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 42);
  CHECK(chain.n() == 0);
  CHECK(chain.population().empty());
  CHECK(chain.l_size() == 0);
  CHECK(*chain.critical() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("scripted step examples") {
  auto birth = scripted(2.0 / 3.0, {0.10, 0.42});
  CHECK(birth.step() == StepEvent{Birth{0.42}});
  CHECK(birth.source().consumed() == 2);

  auto death = seeded(2.0 / 3.0, {0.3, 0.7}, {0.90});
  CHECK(death.step() == StepEvent{Death{0.3}});
  CHECK(death.population().values() == std::vector<double>{0.7});

  auto null = scripted(2.0 / 3.0, {0.90});
  CHECK(null.step() == StepEvent{NullDeath{}});
  CHECK(null.population().empty());
  CHECK(null.n() == 1);
  CHECK(null.source().consumed() == 1);  // no fitness draw on a death
}

TEST_CASE("same seed gives the same trajectory, different seeds diverge") {
  const ModelParams params(2.0 / 3.0);
  auto a = new_chain(params, FitnessLaw::uniform(), 42);
  auto b = new_chain(params, FitnessLaw::uniform(), 42);
  auto c = new_chain(params, FitnessLaw::uniform(), 43);
  bool diverged = false;
  for (int i = 0; i < 1000; ++i) {
    const auto ea = a.step();
    REQUIRE(ea == b.step());
    if (!(ea == c.step())) diverged = true;
  }
  CHECK(a == b);
  CHECK(diverged);
}

TEST_CASE("run equals repeated step and zero steps change nothing") {
  const ModelParams params(2.0 / 3.0);
  auto manual = new_chain(params, FitnessLaw::uniform(), 42);
  for (int i = 0; i < 10; ++i) manual.step();
  auto batched = new_chain(params, FitnessLaw::uniform(), 42);
  Recorder rec;
  run(batched, 10, rec);
  CHECK(batched == manual);
  CHECK(rec.events.size() == 10);

  const auto before = batched;
  Recorder none;
  run(batched, 0, none);
  CHECK(batched == before);
  CHECK(none.events.empty());
}

TEST_CASE("event counts and population size are consistent") {
  auto chain = new_chain(ModelParams(0.6), FitnessLaw::exponential(2.0), 7);
  Recorder rec;
  run(chain, 20000, rec);
  std::size_t births = 0, deaths = 0, nulls = 0;
  for (const auto& e : rec.events) {
    if (std::holds_alternative<Birth>(e)) ++births;
    else if (std::holds_alternative<Death>(e)) ++deaths;
    else ++nulls;
  }
  CHECK(births + deaths + nulls == 20000);
  CHECK(chain.population().size() == births - deaths);
  CHECK(chain.l_size() == chain.l_size_tracked());
  CHECK(rec.l_after.back() == chain.l_size());
}

TEST_CASE("|L| moves by at most one and tracks the recount") {
  auto chain = new_chain(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 3);
  std::size_t prev = 0;
  for (int i = 0; i < 50000; ++i) {
    chain.step();
    const std::size_t l = chain.l_size_tracked();
    REQUIRE((l + 1 >= prev && l <= prev + 1));
    if (i % 1000 == 0) REQUIRE(l == chain.l_size());
    prev = l;
  }
}

TEST_CASE("every death removes the current minimum") {
  auto chain = new_chain(ModelParams(0.55), FitnessLaw::uniform(), 11);
  for (int i = 0; i < 20000; ++i) {
    const auto min_before = chain.population().min();
    const auto e = chain.step();
    if (const auto* d = std::get_if<Death>(&e)) REQUIRE(d->fitness == *min_before);
    if (std::holds_alternative<NullDeath>(e)) REQUIRE_FALSE(min_before.has_value());
  }
}

TEST_CASE("l_size examples") {
  CHECK(seeded(2.0 / 3.0, {0.3, 0.55, 0.7}, {}).l_size() == 1);
  CHECK(seeded(2.0 / 3.0, {0.6, 0.9}, {}).l_size() == 0);
  CHECK(seeded(2.0 / 3.0, {}, {}).l_size() == 0);
  CHECK_THROWS_AS(seeded(0.5, {0.3}, {}).l_size(), ParameterError);
  CHECK(seeded(0.5, {0.3}, {}).l_size_tracked() == 0);
}

TEST_CASE("count_in through the chain") {
  const auto chain = seeded(2.0 / 3.0, {0.3, 0.55, 0.7, 0.9}, {});
  CHECK(chain.count_in(0.5, 0.8) == 2);
  CHECK(chain.count_in(0.2, 0.2) == 0);
  CHECK_THROWS_AS(chain.count_in(0.8, 0.5), ParameterError);
  CHECK(seeded(2.0 / 3.0, {}, {}).count_in(0.0, 1.0) == 0);
}

TEST_CASE("snapshot histogram examples") {
  const auto h = seeded(2.0 / 3.0, {0.25, 0.75}, {}).snapshot_histogram(2, 0.0, 1.0);
  CHECK(h.counts == std::vector<std::uint64_t>{1, 1});
  CHECK(h.underflow == 0);
  CHECK(h.overflow == 0);
  const auto e = seeded(2.0 / 3.0, {}, {}).snapshot_histogram(4, 0.0, 1.0);
  CHECK(e.counts == std::vector<std::uint64_t>(4, 0));
  const auto edge = seeded(2.0 / 3.0, {0.5, 1.0, -0.1}, {}).snapshot_histogram(2, 0.0, 1.0);
  CHECK(edge.counts == std::vector<std::uint64_t>{0, 1});  // bins are [lo,hi)
  CHECK(edge.underflow == 1);
  CHECK(edge.overflow == 1);
  CHECK(edge.total() == 3);
  const auto empty = seeded(2.0 / 3.0, {}, {});
  CHECK_THROWS_AS(empty.snapshot_histogram(0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(empty.snapshot_histogram(2, 1.0, 1.0), ParameterError);
}

TEST_CASE("event log records") {
  std::ostringstream out;
  write_event_record(out, 1, Birth{0.42});
  write_event_record(out, 2, Death{0.25});
  write_event_record(out, 3, NullDeath{});
  CHECK(out.str() == "1,birth,0.42\n2,death,0.25\n3,null_death,\n");

  std::ostringstream a, b;
  auto c1 = new_chain(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 42);
  auto c2 = new_chain(ModelParams(2.0 / 3.0), FitnessLaw::uniform(), 42);
  Recorder r1, r2;
  run(c1, 500, r1, &a);
  run(c2, 500, r2, &b);
  CHECK(a.str() == b.str());
  const std::string log = a.str();
  CHECK(std::count(log.begin(), log.end(), '\n') == 500);
}
