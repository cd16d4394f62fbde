#include "doctest.h"

#include "sfc/gen.hpp"

using namespace sfc;

TEST_SUITE("gen") {
  TEST_CASE("same seed, same documents") {
    GenSpec spec;
    spec.seed = 42;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(dump_topology(a.topology()) == dump_topology(b.topology()));
    CHECK(dump_catalog(a.catalog()) == dump_catalog(b.catalog()));
    CHECK(dump_workload(a.workload(), a.catalog()) == dump_workload(b.workload(), b.catalog()));
    spec.seed = 43;
    CHECK(dump_workload(generate(spec).workload(), a.catalog()) != dump_workload(a.workload(), a.catalog()));
  }

  TEST_CASE("small spec") {
    GenSpec spec;
    spec.servers = 8;
    spec.chains = 4;
    const auto inst = generate(spec);
    CHECK(inst.topology().servers().size() == 8);
    CHECK(inst.workload().size() == 4);
    double sum = 0;
    for (const auto& c : inst.workload().chains()) {
      sum += c.lambda;
      CHECK(c.length() >= 1);
      CHECK(c.length() <= spec.max_chain_len);
      CHECK(c.lambda >= spec.lambda_min);
      CHECK(c.lambda <= spec.lambda_max);
    }
    CHECK(inst.workload().total_rate() == doctest::Approx(sum).epsilon(1e-15));
  }

  TEST_CASE("three switch levels") {
    GenSpec spec;
    spec.servers = 64;
    const auto inst = generate(spec);
    const auto& t = inst.topology();
    for (NodeIndex l : t.servers()) CHECK(t.depth(l) == 3);
    CHECK(t.aggregation_switches().size() == spec.resolved().agg_switches);
    CHECK(t.tors().size() == spec.resolved().tors);
  }

  TEST_CASE("largest scale") {
    GenSpec spec;
    spec.servers = 4096;
    spec.chains = 2048;
    const auto inst = generate(spec);
    CHECK(inst.topology().servers().size() == 4096);
    CHECK(inst.workload().size() == 2048);
  }

  TEST_CASE("invalid specs") {
    GenSpec spec;
    spec.servers = 12;
    CHECK_THROWS_AS(spec.resolved(), InputError);
    spec = {};
    spec.tors = 16;
    CHECK_THROWS_AS(spec.resolved(), InputError);
    spec = {};
    spec.lambda_min = 5;
    spec.lambda_max = 1;
    CHECK_THROWS_AS(generate(spec), InputError);
  }

  TEST_CASE("spec document round trip") {
    GenSpec spec;
    spec.servers = 16;
    spec.seed = 9;
    spec.load = 0.25;
    const auto back = parse_gen_spec(dump_gen_spec(spec));
    CHECK(dump_gen_spec(back) == dump_gen_spec(spec));
    CHECK_THROWS_AS(parse_gen_spec("[1,2]"), InputError);
  }
}
