#include "doctest.h"
#include "fixtures.hpp"

#include "sfc/exact.hpp"
#include "sfc/heuristic.hpp"

using namespace sfc;

TEST_SUITE("exact") {
  TEST_CASE("symmetric servers") {
    const auto inst = sfc::testing::make_instance(
        {sfc::testing::root("r", 64), sfc::testing::srv("a", "r"), sfc::testing::srv("b", "r")}, "r", {"std"}, {"f"},
        {{"std", "f", 16}}, {{"c", {"f"}, 4}});
    const auto r = exact_solve(inst, 0.0);
    CHECK(r.solver.status == SolveStatus::Optimal);
    CHECK(r.solver.objective == 0.25);
    CHECK(r.provisioning.assignment[0][0].begin()->first == inst.topology().index("a"));
    CHECK(r.candidates == 2);
  }

  TEST_CASE("keeps a two-position chain inside one rack") {
    const auto inst = sfc::testing::two_rack_instance({{"c", {"f", "g"}, 4}}, {"f", "g"}, 1024, 64);
    const auto r = exact_solve(inst, 0.0);
    const auto& t = inst.topology();
    const auto& y = r.provisioning.assignment[0];
    CHECK(t.parent(y[0].begin()->first) == t.parent(y[1].begin()->first));
    CHECK(r.solver.objective == 12.0 / 64);
  }

  TEST_CASE("beta one minimizes servers") {
    const auto inst = sfc::testing::two_rack_instance({{"a", {"f"}, 1}, {"b", {"f"}, 1}}, {"f"}, 16);
    const auto r = exact_solve(inst, 1.0);
    CHECK(r.provisioning.servers_used() == 1);
    CHECK(r.solver.objective == 0.25);
  }

  TEST_CASE("budget") {
    const auto inst = sfc::testing::two_rack_instance({{"c", {"f", "g"}, 1}}, {"f", "g"}, 16);
    ExactOptions opt;
    opt.max_servers = 1;
    CHECK(exact_solve(inst, 0.0, opt).solver.status == SolveStatus::Infeasible);
    opt.max_servers = 2;
    const auto r = exact_solve(inst, 0.0, opt);
    CHECK(r.solver.status == SolveStatus::Optimal);
    CHECK(r.provisioning.servers_used() <= 2);
  }

  TEST_CASE("size guard") {
    std::vector<NodeSpec> nodes{sfc::testing::root("r", 100)};
    for (int i = 0; i < 9; ++i) nodes.push_back(sfc::testing::srv("s" + std::to_string(i), "r"));
    const auto inst = sfc::testing::make_instance(nodes, "r", {"std"}, {"f"}, {{"std", "f", 8}}, {{"c", {"f"}, 1}});
    CHECK_THROWS_AS(exact_solve(inst, 0.0), UnsupportedError);
    const auto long_chain = sfc::testing::two_rack_instance(
        {{"c", {"f", "f", "f", "f", "f"}, 1}, {"d", {"f", "f", "f", "f"}, 1}}, {"f"}, 64);
    CHECK_THROWS_AS(exact_solve(long_chain, 0.0), UnsupportedError);
  }

  TEST_CASE("optimum bounds the heuristic at equal budget") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      sfc::testing::TinySpec spec;
      spec.roomy = true;
      const auto inst = sfc::testing::tiny_random(seed, spec);
      const auto h = round_robin_place(inst);
      if (h.provisioning.deployed_count() == 0) continue;
      ExactOptions opt;
      opt.max_servers = h.provisioning.servers_used();
      opt.deploy = h.provisioning.deployed;
      const auto r = exact_solve(inst, 0.0, opt);
      REQUIRE(r.solver.status == SolveStatus::Optimal);
      CHECK(r.solver.objective <= compute_traffic(inst, h.provisioning, TrafficMode::Physical).rho_max);
    }
  }

  TEST_CASE("every result is feasible in both modes") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const auto inst = sfc::testing::tiny_random(seed);
      for (auto mode : {TrafficMode::Physical, TrafficMode::Paper}) {
        ExactOptions opt;
        opt.mode = mode;
        const auto r = exact_two_phase(inst, 0.5, opt);
        CHECK(check_feasibility(inst, r.provisioning, mode).feasible());
      }
    }
  }

  TEST_CASE("deterministic") {
    const auto inst = sfc::testing::tiny_random(5);
    CHECK(exact_solve(inst, 0.3).provisioning == exact_solve(inst, 0.3).provisioning);
  }
}
