#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>

#include "sfc/exact.hpp"
#include "sfc/heuristic.hpp"
#include "sfc/mip.hpp"

using namespace sfc;
using sfc::testing::ChainDef;

namespace {

std::map<int, std::size_t> family_counts(const MipModel& m) {
  std::map<int, std::size_t> out;
  for (const auto& c : m.constraints) ++out[c.family];
  return out;
}

void check_counts(const Instance& inst, const ModelOptions& opt) {
  const auto m = build_model(inst, opt);
  const auto want = expected_counts(inst, opt);
  CHECK(m.variables.size() == want.variables());
  CHECK(m.constraints.size() == want.constraints());
  auto got = family_counts(m);
  for (const auto& [family, n] : want.rows) CHECK(got[family] == n);
}

Instance mixed_instance() {
  return sfc::testing::two_rack_instance({{"a", {"f", "g"}, 2, 3}, {"b", {"g"}, 3, 1}, {"c", {"f"}, 1, 2}}, {"f", "g"},
                                         16, 64);
}

}  // namespace

TEST_SUITE("mip") {
  TEST_CASE("single chain model by hand") {
    const auto inst = sfc::testing::line_instance(5, 100, 50);
    const auto m = build_model(inst, {});
    CHECK(m.variables.size() == 6);  // x, y, b_l, b_r, b_s, rho
    CHECK(m.find("x_f_l"));
    CHECK(m.find("y_c_1_l"));
    CHECK(m.find("b_r"));
    CHECK(m.find("rho"));
    const auto rows = family_counts(m);
    CHECK(rows.at(9) == 1);
    CHECK(rows.at(10) == 1);
    CHECK(rows.at(11) == 1);
    CHECK_FALSE(rows.contains(12));
    CHECK_FALSE(rows.contains(15));
    CHECK(rows.at(16) == 2);
    CHECK(rows.at(17) == 1);
    CHECK(rows.at(18) == 2);
    CHECK(rows.at(19) == 1);
    CHECK(rows.at(20) == 2);
    CHECK(rows.at(21) == 1);
    CHECK(m.constraints.size() == 12);
  }

  TEST_CASE("counts follow the instance dimensions") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = sfc::testing::tiny_random(seed);
      for (bool ext : {false, true}) {
        for (auto mode : {TrafficMode::Physical, TrafficMode::Paper}) {
          ModelOptions opt;
          opt.priority_extension = ext;
          opt.mode = mode;
          opt.beta = 0.5;
          if (ext) opt.max_servers = 2;
          check_counts(inst, opt);
        }
      }
    }
  }

  TEST_CASE("beta zero objective is rho alone") {
    const auto m = build_model(mixed_instance(), {});
    REQUIRE(m.objective.size() == 1);
    CHECK(m.variables[m.objective[0].var].name == "rho");
    CHECK(m.objective[0].coef == 1.0);
    CHECK(export_lp(m).find("obj: rho") != std::string::npos);
  }

  TEST_CASE("beta one objective counts servers") {
    const auto inst = mixed_instance();
    ModelOptions opt;
    opt.beta = 1.0;
    const auto m = build_model(inst, opt);
    CHECK(m.objective.size() == 2 * 4);
    for (const auto& t : m.objective) CHECK(t.coef == 0.25);
  }

  TEST_CASE("priority rows") {
    const auto inst = sfc::testing::two_rack_instance(
        {{"a", {"f"}, 1, 3}, {"b", {"f"}, 1, 2}, {"c", {"f"}, 1, 1}}, {"f"}, 16);
    ModelOptions opt;
    opt.priority_extension = true;
    const auto m = build_model(inst, opt);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& c : m.constraints) {
      if (c.family != 23) continue;
      REQUIRE(c.terms.size() == 2);
      const auto& hi = c.terms[0].coef > 0 ? c.terms[0] : c.terms[1];
      const auto& lo = c.terms[0].coef > 0 ? c.terms[1] : c.terms[0];
      CHECK(c.sense == Sense::GreaterEqual);
      pairs.emplace_back(m.variables[hi.var].name, m.variables[lo.var].name);
    }
    std::sort(pairs.begin(), pairs.end());
    CHECK(pairs == std::vector<std::pair<std::string, std::string>>{{"d_a", "d_b"}, {"d_a", "d_c"}, {"d_b", "d_c"}});

    const auto flat = sfc::testing::two_rack_instance({{"a", {"f"}, 1}, {"b", {"f"}, 1}}, {"f"}, 16);
    CHECK_FALSE(family_counts(build_model(flat, opt)).contains(23));
  }

  TEST_CASE("big M never binds") {
    const auto inst = sfc::testing::make_instance(
        {sfc::testing::root("r", 100), sfc::testing::srv("a", "r", "slow"), sfc::testing::srv("b", "r", "fast")}, "r",
        {"slow", "fast"}, {"f", "g"}, {{"slow", "f", 2}, {"fast", "f", 200}, {"fast", "g", 1}}, {{"c", {"f"}, 1}});
    const double m = big_m(inst.catalog());
    CHECK(m >= 1 + 200);
    CHECK(m >= 1 + 200.0 / 1.0);
  }

  TEST_CASE("names are sanitized and collisions rejected") {
    CHECK(sanitize_name("tor-1.a") == "tor_1_a");
    const auto inst = sfc::testing::make_instance(
        {sfc::testing::root("r", 100), sfc::testing::srv("a-b", "r"), sfc::testing::srv("a.b", "r")}, "r", {"std"},
        {"f"}, {{"std", "f", 2}}, {{"c", {"f"}, 1}});
    CHECK_THROWS_AS(build_model(inst, {}), InputError);
  }

  TEST_CASE("lp and mps round trips") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = sfc::testing::tiny_random(seed);
      ModelOptions opt;
      opt.beta = 0.3;
      opt.priority_extension = seed % 2 == 1;
      if (seed % 3 == 0) opt.max_servers = 2;
      auto m = build_model(inst, opt);
      m.name = "case" + std::to_string(seed);

      const auto lp = export_lp(m);
      const auto from_lp = parse_lp(lp);
      CHECK(from_lp == m);
      CHECK(export_lp(from_lp) == lp);

      const auto mps = export_mps(m);
      const auto from_mps = parse_mps(mps);
      CHECK(from_mps == m);
      CHECK(export_mps(from_mps) == mps);
    }
  }

  TEST_CASE("format names") {
    CHECK(parse_model_format("lp") == ModelFormat::Lp);
    CHECK(parse_model_format("mps") == ModelFormat::Mps);
    CHECK_THROWS_AS(parse_model_format("xml"), InputError);
  }

  TEST_CASE("solver value formats") {
    const VariableValues want{{"rho", 0.25}, {"x_f_l", 1}};
    CHECK(parse_values(R"({"rho":0.25,"x_f_l":1})") == want);
    CHECK(parse_values("# comment\nrho 0.25\n\nx_f_l 1\n") == want);
    CHECK(parse_values("Optimal - objective value 0.25\n0 rho 0.25 0\n1 x_f_l 1 0\n") == want);
    CHECK(parse_values(values_json(want)) == want);
    CHECK_THROWS_AS(parse_values("rho 1\nnonsense\n"), InputError);
  }

  TEST_CASE("ingest an exact optimum") {
    const auto inst = mixed_instance();
    ModelOptions opt;
    const auto m = build_model(inst, opt);
    const auto ex = exact_solve(inst, 0.0);
    const auto p = ingest_solution(m, inst, opt, ex.solver.values);
    CHECK(p == ex.provisioning);
    CHECK(check_feasibility(inst, p, TrafficMode::Physical).feasible());
  }

  TEST_CASE("truncated output lists missing variables") {
    const auto inst = mixed_instance();
    const auto m = build_model(inst, {});
    auto values = exact_solve(inst, 0.0).solver.values;
    values.erase("rho");
    values.erase("b_r");
    try {
      ingest_solution(m, inst, {}, values);
      FAIL("accepted");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("rho") != std::string::npos);
      CHECK(msg.find("b_r") != std::string::npos);
    }
  }

  TEST_CASE("flow conservation mismatch") {
    const auto inst = sfc::testing::two_rack_instance({{"c", {"f", "f"}, 2}}, {"f"}, 16);
    const auto& t = inst.topology();
    const NodeIndex a = t.index("s00"), b = t.index("s01");
    auto p = Provisioning::empty(inst, true);
    p.placement[a] = {0};
    p.placement[b] = {0};
    p.assignment[0][0] = {{a, 0.5}, {b, 0.5}};
    p.assignment[0][1] = {{a, 0.5}, {b, 0.5}};
    p.transitions[0][0] = {{{a, a}, 0.5}, {{b, b}, 0.5}};
    const auto m = build_model(inst, {});
    auto values = warm_start(m, inst, {}, p);
    CHECK(ingest_solution(m, inst, {}, values) == p);
    values["z_c_1_s00_s00"] = 0;
    values["z_c_1_s00_s01"] = 0.5;
    try {
      ingest_solution(m, inst, {}, values);
      FAIL("accepted");
    } catch (const FeasibilityMismatch& e) {
      const auto& ids = e.constraints();
      CHECK(std::find(ids.begin(), ids.end(), 15) != ids.end());
    }
  }

  TEST_CASE("wrong rho is caught") {
    const auto inst = mixed_instance();
    const auto m = build_model(inst, {});
    auto values = exact_solve(inst, 0.0).solver.values;
    values["rho"] += 0.01;
    try {
      ingest_solution(m, inst, {}, values);
      FAIL("accepted");
    } catch (const FeasibilityMismatch& e) {
      REQUIRE(e.constraints().size() == 1);
      CHECK((e.constraints()[0] == 20 || e.constraints()[0] == 21));
    }
  }

  TEST_CASE("warm start of the heuristic") {
    const auto inst = mixed_instance();
    const auto h = round_robin_place(inst);
    REQUIRE(h.provisioning.deployed_count() == 3);
    for (double beta : {0.0, 0.4, 1.0}) {
      ModelOptions opt;
      opt.beta = beta;
      const auto m = build_model(inst, opt);
      const auto start = warm_start(m, inst, opt, h.provisioning);
      CHECK(start.size() == m.variables.size());
      const auto tp = compute_traffic(inst, h.provisioning, TrafficMode::Physical);
      CHECK(evaluate_objective(m, start) == doctest::Approx(objective(tp, beta, 4)).epsilon(1e-12));
      CHECK(ingest_solution(m, inst, opt, start) == h.provisioning);
    }
  }

  TEST_CASE("empty warm start in extension mode") {
    const auto inst = mixed_instance();
    ModelOptions opt;
    opt.priority_extension = true;
    const auto m = build_model(inst, opt);
    const auto start = warm_start(m, inst, opt, Provisioning::empty(inst, false));
    for (const auto& [name, v] : start) CHECK(v == 0.0);
    CHECK_THROWS_AS(warm_start(build_model(inst, {}), inst, {}, Provisioning::empty(inst, false)), InputError);
  }

  TEST_CASE("two phase through the exact backend") {
    const auto inst = sfc::testing::make_instance(
        {sfc::testing::root("r", 1000), sfc::testing::sw("t", "r", 1000), sfc::testing::srv("l", "t")}, "r", {"std"},
        {"f"}, {{"std", "f", 10}}, {{"p1", {"f"}, 4, 3}, {"p2", {"f"}, 4, 2}, {"p3", {"f"}, 4, 1}});
    const auto p = two_phase_solve(inst, 0.0, TrafficMode::Physical, exact_backend(inst, TrafficMode::Physical));
    CHECK(p.deployed == std::vector<std::uint8_t>{1, 1, 0});
    CHECK(exact_two_phase(inst, 0.0).provisioning == p);

    const auto all = mixed_instance();
    const auto q = two_phase_solve(all, 0.0, TrafficMode::Physical, exact_backend(all, TrafficMode::Physical));
    CHECK(q.deployed_count() == 3);
    CHECK(compute_traffic(all, q, TrafficMode::Physical).rho_max ==
          compute_traffic(all, exact_solve(all, 0.0).provisioning, TrafficMode::Physical).rho_max);
  }

  TEST_CASE("equal priorities allow any maximal subset") {
    const auto inst = sfc::testing::make_instance(
        {sfc::testing::root("r", 1000), sfc::testing::sw("t", "r", 1000), sfc::testing::srv("l", "t")}, "r", {"std"},
        {"f"}, {{"std", "f", 10}}, {{"a", {"f"}, 4}, {"b", {"f"}, 4}, {"c", {"f"}, 4}});
    const auto p = two_phase_solve(inst, 0.0, TrafficMode::Physical, exact_backend(inst, TrafficMode::Physical));
    CHECK(p.deployed_count() == 2);
  }

  TEST_CASE("status names") {
    CHECK(to_string(SolveStatus::Optimal) == "optimal");
    CHECK(to_string(SolveStatus::Timeout) == "timeout");
  }
}
