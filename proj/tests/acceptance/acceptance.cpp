// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "sfc/exact.hpp"
#include "sfc/frontier.hpp"
#include "sfc/gen.hpp"
#include "sfc/heuristic.hpp"
#include "sfc/latency.hpp"
#include "sfc/mip.hpp"
#include "sfc/simulation.hpp"

using namespace sfc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kQueueRelError = 0.03;
constexpr std::uint64_t kQueueMinPackets = 1'000'000;
constexpr std::uint64_t kQueueMaxPackets = 30'000'000;
constexpr double kDropMinExpected = 1e4;  // expected drops needed for a relative check
constexpr double kQueueSecondsPerPoint = 60.0;
constexpr double kResendRelError = 0.05;
constexpr std::uint64_t kResendPackets = 1'000'000;
constexpr double kNoDropTolerance = 1e-12;
constexpr double kSteepFactor = 10.0;
constexpr int kFidelityInstances = 100;
constexpr int kOracleInstances = 25;
constexpr int kParetoInstances = 10;
constexpr double kHeuristicSeconds = 5.0;
constexpr int kRandomSeeds = 10;
constexpr double kLinearity = 1e-9;

struct Outcome {
  bool ok = true;
  std::string detail;
  int failures = 0;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failures++ < 5) detail += (detail.empty() ? "" : "; ") + what;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// 1 -----------------------------------------------------------------------

Outcome queue_oracle() {
  Outcome o;
  double worst_tau = 0, worst_drop = 0, slowest = 0;
  int drop_checks = 0, bound_checks = 0;
  std::uint64_t seed = 11;
  for (double mu : {12.5, 20.0, 40.0}) {
    for (int k : {1, 10, 100}) {
      const QueueParams q{10.0, mu, k};
      const double tau = node_latency(q);
      const double p = drop_probability(q);
      const double wanted = std::ceil(1.2 * kDropMinExpected / std::max(p, 1e-300));
      const auto packets = static_cast<std::uint64_t>(
          std::clamp(wanted, static_cast<double>(kQueueMinPackets), static_cast<double>(kQueueMaxPackets)));
      const auto start = Clock::now();
      const auto sim = simulate_queue(q, packets, seed++);
      const double took = seconds_since(start);
      slowest = std::max(slowest, took);
      o.expect(took < kQueueSecondsPerPoint, fmt("mu=%g K=%g took %gs", mu, k, took));

      const double e_tau = rel(sim.mean_sojourn, tau);
      worst_tau = std::max(worst_tau, e_tau);
      o.expect(e_tau <= kQueueRelError, fmt("tau mu=%g K=%g err %g", mu, k, e_tau));

      const double expected = p * static_cast<double>(sim.arrivals);
      if (expected >= kDropMinExpected) {
        ++drop_checks;
        const double e_drop = rel(sim.drop_fraction, p);
        worst_drop = std::max(worst_drop, e_drop);
        o.expect(e_drop <= kQueueRelError, fmt("P(K) mu=%g K=%g err %g", mu, k, e_drop));
      } else {
        // Too rare to resolve: the drop count must stay within a Poisson bound.
        ++bound_checks;
        const double bound = expected + 6.0 * std::sqrt(expected) + 3.0;
        o.expect(static_cast<double>(sim.dropped) <= bound,
                 fmt("P(K) mu=%g K=%g: %g drops", mu, k, static_cast<double>(sim.dropped)));
      }
    }
  }
  o.detail += (o.detail.empty() ? "" : " | ") + fmt("max tau err %.4f, max P(K) err %.4f", worst_tau, worst_drop) +
              fmt(" over %g points (%g rare-drop bounds), slowest %.1fs", drop_checks, bound_checks, slowest);
  return o;
}

// 2 -----------------------------------------------------------------------

Outcome resend_oracle() {
  Outcome o;
  const std::vector<std::vector<HopCost>> paths{
      {{0.1, 0.0}, {0.1, 0.5}, {0.1, 0.2}},
      {{0.05, 0.0}, {0.2, 0.1}, {0.02, 0.4}},
      {{0.3, 0.0}, {0.01, 0.6}, {0.1, 0.05}},
      {{0.1, 0.0}, {0.1, 0.0}, {0.1, 0.3}},
  };
  double worst = 0;
  std::uint64_t seed = 5;
  for (const auto& path : paths) {
    const double want = chain_latency(path);
    const auto sim = simulate_resend_path(path, kResendPackets, seed++);
    const double e = rel(sim.mean_latency, want);
    worst = std::max(worst, e);
    o.expect(e <= kResendRelError, fmt("path err %g (sim %g, formula %g)", e, sim.mean_latency, want));
  }
  const std::vector<HopCost> clean{{0.1, 0.0}, {0.25, 0.0}, {0.0625, 0.0}};
  const double sum = 0.1 + 0.25 + 0.0625;
  o.expect(std::abs(chain_latency(clean) - sum) <= kNoDropTolerance, "no-drop path differs from the sum");
  const std::vector<QueueParams> params{{10, 1e9, 100}, {10, 1e9, 100}, {10, 1e9, 100}};
  double tau_sum = 0;
  for (const auto& q : params) tau_sum += node_latency(q);
  o.expect(std::abs(chain_latency(params) - tau_sum) <= kNoDropTolerance * std::max(1.0, tau_sum),
           "drop-free queues do not collapse to the sum");
  o.detail += (o.detail.empty() ? "" : " | ") + fmt("max rel err %.4f over %g paths; P=0 case exact", worst,
                                                    static_cast<double>(paths.size()));
  return o;
}

// 3 -----------------------------------------------------------------------

Outcome steep_growth() {
  Outcome o;
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  grid.push_back(0.99);
  const auto pts = queue_curve(10.0, 100, grid);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    o.expect(pts[i].latency > pts[i - 1].latency, fmt("tau not increasing at rho=%g", grid[i]));
    o.expect(pts[i].drop_probability > pts[i - 1].drop_probability, fmt("P(K) not increasing at rho=%g", grid[i]));
  }
  const double half = node_latency({10.0, 20.0, 100});
  const double top = pts.back().latency;
  o.expect(top > kSteepFactor * half, fmt("tau(0.99)=%g vs tau(0.5)=%g", top, half));
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("tau(0.99)/tau(0.5) = %.1f on %g grid points", top / half, static_cast<double>(grid.size()));
  return o;
}

// 4 -----------------------------------------------------------------------

struct Corruption {
  int family;
  std::function<void(Provisioning&, ReportedTraffic&, const Instance&)> apply;
  std::optional<Instance> variant;
};

Outcome constraint_fidelity() {
  Outcome o;
  int checked = 0;
  for (int seed = 0; seed < kFidelityInstances; ++seed) {
    const Instance inst = sfc::testing::tiny_random(static_cast<std::uint64_t>(seed));
    for (TrafficMode mode : {TrafficMode::Physical, TrafficMode::Paper}) {
      auto feasible = [&](const Provisioning& p, const char* who) {
        ++checked;
        o.expect(check_feasibility(inst, p, mode).feasible(),
                 std::string(who) + " infeasible on seed " + std::to_string(seed));
      };
      HeuristicConfig hc;
      hc.mode = mode;
      feasible(round_robin_place(inst, hc).provisioning, "round_robin_place");
      feasible(random_place(inst, static_cast<std::uint64_t>(seed), hc).provisioning, "random_place");

      ExactOptions eo;
      eo.mode = mode;
      ExactResult ex = exact_solve(inst, 0.5, eo);
      ModelOptions mo{0.5, false, mode, std::nullopt};
      if (ex.solver.status != SolveStatus::Optimal) {
        ex = exact_two_phase(inst, 0.5, eo);
        mo.priority_extension = true;
      }
      feasible(ex.provisioning, "exact_solve");
      const MipModel model = build_model(inst, mo);
      const Provisioning back = ingest_solution(model, inst, mo, warm_start(model, inst, mo, ex.provisioning));
      feasible(back, "ingest_solution");
      o.expect(back == ex.provisioning, "ingest changed the provisioning on seed " + std::to_string(seed));
    }
  }

  // One hand-built split solution, corrupted once per family.
  using sfc::testing::ChainDef;
  const std::vector<ChainDef> chains{{"c0", {"f", "g"}, 4}, {"c1", {"f"}, 2}};
  const Instance base = sfc::testing::two_rack_instance(chains, {"f", "g"}, 16, 64);
  const Topology& t = base.topology();
  const NodeIndex s00 = t.index("s00"), s01 = t.index("s01"), s10 = t.index("s10"), s11 = t.index("s11");
  Provisioning good = Provisioning::empty(base, true);
  good.placement[s00] = {0};
  good.placement[s01] = {1};
  good.placement[s10] = {0};
  good.placement[s11] = {1};
  good.assignment[0][0] = {{s00, 0.5}, {s10, 0.5}};
  good.assignment[0][1] = {{s01, 0.5}, {s11, 0.5}};
  good.transitions[0][0] = {{{s00, s01}, 0.5}, {{s10, s11}, 0.5}};
  good.assignment[1][0] = {{s00, 1.0}};
  o.expect(check_feasibility(base, good, TrafficMode::Physical).feasible(), "corruption base is infeasible");
  const std::vector<double> true_b = compute_traffic(base, good, TrafficMode::Physical).b;

  std::vector<Corruption> cases;
  cases.push_back({9, [&](auto& p, auto&, auto&) { p.placement[s00] = {0, 1}; }, std::nullopt});
  cases.push_back({10, [&](auto& p, auto&, auto&) { p.assignment[1][0] = {{s01, 1.0}}; }, std::nullopt});
  cases.push_back({11, [&](auto& p, auto&, auto&) { p.assignment[1][0] = {{s00, 0.7}}; }, std::nullopt});
  cases.push_back({12, [&](auto& p, auto&, auto&) { p.assignment[0][0] = {{s00, 0.3}, {s10, 0.7}}; }, std::nullopt});
  cases.push_back({13, [&](auto& p, auto&, auto&) { p.assignment[0][1] = {{s01, 0.3}, {s11, 0.7}}; }, std::nullopt});
  cases.push_back({14, [&](auto& p, auto&, auto&) { p.transitions[0][0][{s10, s11}] = 0.4; }, std::nullopt});
  cases.push_back(
      {15, [&](auto& p, auto&, auto&) { p.transitions[0][0] = {{{s00, s01}, 0.5}, {{s10, s01}, 0.5}}; }, std::nullopt});
  cases.push_back({16, [&](auto&, auto& r, auto&) { r.b[t.index("t0")] += 1.0; }, std::nullopt});
  cases.push_back({17, [&](auto&, auto& r, auto&) { r.b[t.root()] -= 1.0; }, std::nullopt});
  cases.push_back({18, [](auto&, auto&, auto&) {}, sfc::testing::two_rack_instance(chains, {"f", "g"}, 16, 8)});
  cases.push_back({19, [](auto&, auto&, auto&) {}, sfc::testing::two_rack_instance(chains, {"f", "g"}, 2, 64)});

  std::string caught;
  for (auto& c : cases) {
    const Instance& inst = c.variant ? *c.variant : base;
    Provisioning p = good;
    ReportedTraffic reported{true_b, std::nullopt};
    c.apply(p, reported, inst);
    const auto rep = check_feasibility(inst, p, TrafficMode::Physical, &reported);
    const bool hit = !rep.feasible() && rep.has(c.family);
    o.expect(hit, "corruption of family " + std::to_string(c.family) + " not reported");
    if (hit) caught += (caught.empty() ? "" : ",") + std::to_string(c.family);
  }
  o.detail += (o.detail.empty() ? "" : " | ") + std::to_string(checked) + " provisionings feasible; corruptions caught: " +
              caught;
  return o;
}

// 5 -----------------------------------------------------------------------

// Second, naive optimizer: every x (each server empty or one admissible VNF)
// times every unsplit y consistent with x.
std::optional<double> brute_force(const Instance& inst, double beta) {
  const Topology& t = inst.topology();
  const auto servers = t.servers();
  const auto& chains = inst.workload().chains();
  const std::size_t nv = inst.catalog().vnf_types().size();
  std::vector<std::pair<std::size_t, std::size_t>> positions;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < chains[c].length(); ++i) positions.emplace_back(c, i);
  }
  std::optional<double> best;
  std::vector<int> x(servers.size(), -1);
  std::vector<std::size_t> y(positions.size(), 0);

  std::function<void(std::size_t)> place_y = [&](std::size_t k) {
    if (k == positions.size()) {
      Provisioning p = Provisioning::empty(inst, true);
      for (std::size_t s = 0; s < servers.size(); ++s) {
        if (x[s] >= 0) p.placement[servers[s]] = {static_cast<VnfIndex>(x[s])};
      }
      std::size_t at = 0;
      for (std::size_t c = 0; c < chains.size(); ++c) {
        std::vector<NodeIndex> route;
        for (std::size_t i = 0; i < chains[c].length(); ++i) route.push_back(servers[y[at++]]);
        p.route_unsplit(c, route);
      }
      if (!check_feasibility(inst, p, TrafficMode::Physical).feasible()) return;
      const double w = objective(compute_traffic(inst, p, TrafficMode::Physical), beta, servers.size());
      if (!best || w < *best) best = w;
      return;
    }
    const auto [c, i] = positions[k];
    for (std::size_t s = 0; s < servers.size(); ++s) {
      if (x[s] != static_cast<int>(chains[c].vnfs[i])) continue;
      y[k] = s;
      place_y(k + 1);
    }
  };
  std::function<void(std::size_t)> place_x = [&](std::size_t s) {
    if (s == servers.size()) {
      place_y(0);
      return;
    }
    for (int v = -1; v < static_cast<int>(nv); ++v) {
      if (v >= 0 && !inst.gamma(servers[s], static_cast<VnfIndex>(v))) continue;
      x[s] = v;
      place_x(s + 1);
    }
    x[s] = -1;
  };
  place_x(0);
  return best;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome exact_oracle() {
  Outcome o;
  sfc::testing::TinySpec spec;
  spec.max_servers = 4;
  spec.max_positions = 6;
  spec.roomy = true;
  const std::string root = sfc::testing::temp_dir("acceptance_compare");
  std::vector<std::string> cli_args{"sfcprov", "compare", "--out", root, "--random-seeds", "3", "--instances"};
  int compared = 0, optimal = 0, infeasible = 0;
  double worst_gap = 0;
  for (int seed = 0; seed < kOracleInstances; ++seed) {
    const Instance inst = sfc::testing::tiny_random(1000 + static_cast<std::uint64_t>(seed), spec);
    for (double beta : {0.0, 0.5}) {
      const ExactResult ex = exact_solve(inst, beta);
      const auto naive = brute_force(inst, beta);
      if (!naive) {
        ++infeasible;
        o.expect(ex.solver.status == SolveStatus::Infeasible, "exact found a solution the brute force did not");
        continue;
      }
      ++optimal;
      o.expect(ex.solver.status == SolveStatus::Optimal && ex.solver.objective == *naive,
               fmt("seed %g beta %g: exact %.17g", seed, beta, ex.solver.objective) + fmt(" vs naive %.17g", *naive));
    }

    const PlacementResult h = round_robin_place(inst);
    o.expect(sfc::testing::unsplit(h.provisioning), "heuristic split a position on seed " + std::to_string(seed));
    if (h.provisioning.deployed_count() == 0) continue;
    ExactOptions eo;
    eo.max_servers = h.provisioning.servers_used();
    eo.deploy = h.provisioning.deployed;
    const ExactResult at_budget = exact_solve(inst, 0.0, eo);
    const double rho_h = compute_traffic(inst, h.provisioning, TrafficMode::Physical).rho_max;
    o.expect(at_budget.solver.status == SolveStatus::Optimal, "no exact solution at the heuristic's budget");
    o.expect(rho_h >= at_budget.solver.objective, fmt("seed %g: heuristic rho %g < exact %g", seed, rho_h,
                                                      at_budget.solver.objective));
    ++compared;

    const std::string dir = root + "/i" + std::to_string(seed);
    fs::create_directories(dir);
    write_instance_dir(inst, dir);
    cli_args.push_back(dir);
  }

  const int code = sfc::cli::run(cli_args);
  o.expect(code == sfc::cli::kOk || code == sfc::cli::kInfeasible, "compare exited with " + std::to_string(code));
  const auto rows = nlohmann::json::parse(slurp(fs::path(root) / "compare.json"));
  o.expect(rows.size() == static_cast<std::size_t>(compared), "compare wrote the wrong number of rows");
  for (const auto& row : rows) {
    if (row["gap_percent"].is_null()) {
      o.expect(false, "compare row without a gap: " + row["instance"].get<std::string>());
      continue;
    }
    const double rh = row["rho_heuristic"], re = row["rho_exact"], gap = row["gap_percent"];
    o.expect(gap >= 0.0, fmt("negative gap %g", gap));
    o.expect(std::abs(gap - (rh - re) / re * 100.0) <= 1e-9 * std::max(1.0, std::abs(gap)), "gap formula mismatch");
    worst_gap = std::max(worst_gap, gap);
  }
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("%g optima equal the brute force (%g infeasible), %g budget comparisons", optimal, infeasible,
                  compared) +
              fmt(", max compare gap %.2f%%", worst_gap);
  return o;
}

// 6 -----------------------------------------------------------------------

Outcome pareto_property() {
  Outcome o;
  const std::vector<double> betas{0.0, 0.25, 0.5, 0.75, 1.0};
  int used = 0;
  std::size_t kept_total = 0;
  for (std::uint64_t seed = 0; used < kParetoInstances && seed < 1000; ++seed) {
    const Instance inst = sfc::testing::tiny_random(2000 + seed);
    if (exact_solve(inst, 0.0).solver.status != SolveStatus::Optimal) continue;
    ++used;
    const auto pts = sweep_beta(inst, betas, ExactOptions{}, LatencyConfig{});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      o.expect(pts[i].ok(), "sweep point failed: " + pts[i].status);
      if (i == 0) continue;
      o.expect(pts[i].servers_used <= pts[i - 1].servers_used,
               fmt("seed %g: servers rose at beta %g", static_cast<double>(2000 + seed), betas[i]));
      o.expect(pts[i].rho_max >= pts[i - 1].rho_max,
               fmt("seed %g: rho fell at beta %g", static_cast<double>(2000 + seed), betas[i]));
    }
    const auto kept = pareto_filter(pts);
    kept_total += kept.size();
    auto dominates = [](const FrontierPoint& a, const FrontierPoint& b) {
      return a.servers_used <= b.servers_used && a.rho_max <= b.rho_max &&
             (a.servers_used < b.servers_used || a.rho_max < b.rho_max);
    };
    for (const auto& a : kept) {
      for (const auto& b : kept) o.expect(!dominates(a, b), "pareto_filter kept a dominated point");
    }
    for (const auto& p : pts) {
      const bool covered = std::any_of(kept.begin(), kept.end(), [&](const FrontierPoint& k) {
        return dominates(k, p) || (k.servers_used == p.servers_used && k.rho_max == p.rho_max);
      });
      o.expect(covered, "pareto_filter dropped a non-dominated point");
    }
    for (std::size_t i = 1; i < kept.size(); ++i) {
      o.expect(kept[i - 1].servers_used <= kept[i].servers_used, "pareto output not ordered by servers");
    }
  }
  o.expect(used == kParetoInstances, "not enough feasible tiny instances");
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("%g instances x %g betas, %g frontier points kept", used, static_cast<double>(betas.size()),
                  static_cast<double>(kept_total));
  return o;
}

// 7 -----------------------------------------------------------------------

Outcome heuristic_scale() {
  Outcome o;
  GenSpec spec;
  spec.servers = 4096;
  spec.chains = 2048;
  spec.seed = 1;
  const Instance inst = generate(spec);
  const auto start = Clock::now();
  const PlacementResult h = round_robin_place(inst);
  const double took = seconds_since(start);
  o.expect(took <= kHeuristicSeconds, fmt("round_robin_place took %.2fs", took));
  o.expect(check_feasibility(inst, h.provisioning, TrafficMode::Physical).feasible(), "heuristic result infeasible");
  double random_rate = 0.0;
  for (int k = 0; k < kRandomSeeds; ++k) random_rate += random_place(inst, 1 + k).deployment_rate();
  random_rate /= kRandomSeeds;
  o.expect(h.deployment_rate() >= random_rate, fmt("heuristic rate %g < random %g", h.deployment_rate(), random_rate));
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("%.2fs on 4096 servers / 2048 chains; deployment %.4f vs random %.4f", took, h.deployment_rate(),
                  random_rate);
  return o;
}

// 8 -----------------------------------------------------------------------

Outcome traffic_arithmetic() {
  Outcome o;
  const Instance line = sfc::testing::line_instance(5, 100, 50);
  const Topology& t = line.topology();
  const NodeIndex r = t.index("r"), s = t.index("s"), l = t.index("l");
  Provisioning p = Provisioning::empty(line, false);
  p.placement[l] = {0};
  p.route_unsplit(0, {l});
  const auto phys = compute_traffic(line, p, TrafficMode::Physical);
  o.expect(phys.b[r] == 10 && phys.b[s] == 10 && phys.b[l] == 5, "physical-mode hand example");
  const auto paper = compute_traffic(line, p, TrafficMode::Paper);
  o.expect(paper.b[r] == 10 && paper.b[s] == 15 && paper.b[l] == 10, "paper-mode hand example");
  const auto none = compute_traffic(line, Provisioning::empty(line, false), TrafficMode::Paper);
  o.expect(std::all_of(none.b.begin(), none.b.end(), [](double v) { return v == 0.0; }) && none.rho_max == 0.0,
           "empty provisioning carries traffic");
  Provisioning tight = p;
  const auto tight_rep = check_feasibility(sfc::testing::line_instance(5, 100, 4), tight, TrafficMode::Physical);
  o.expect(tight_rep.violations.size() == 1 && tight_rep.violations[0].constraint == 19 &&
               tight_rep.violations[0].magnitude == 1.0,
           "capacity example");

  double worst = 0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GenSpec spec;
    spec.servers = 16;
    spec.chains = 6;
    spec.seed = seed;
    const Instance inst = generate(spec);
    for (TrafficMode mode : {TrafficMode::Physical, TrafficMode::Paper}) {
      HeuristicConfig hc;
      hc.mode = mode;
      const Provisioning q = round_robin_place(inst, hc).provisioning;
      const double factor = 1.0 + 0.37 * static_cast<double>(seed);
      std::vector<ServiceChain> scaled = inst.workload().chains();
      for (auto& c : scaled) c.lambda *= factor;
      const auto base = compute_traffic(inst, q, mode).b;
      const auto big = compute_traffic(inst.with_workload(Workload(scaled)), q, mode).b;
      for (std::size_t n = 0; n < base.size(); ++n) {
        const double e = std::abs(big[n] - factor * base[n]) / std::max(1.0, std::abs(factor * base[n]));
        worst = std::max(worst, e);
      }
      ++runs;
    }
  }
  o.expect(worst <= kLinearity, fmt("linearity error %g", worst));
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("hand examples exact in both modes; linearity error %.2e over %g runs", worst, runs);
  return o;
}

// 9 -----------------------------------------------------------------------

Outcome round_trips() {
  Outcome o;
  int models = 0, solutions = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = sfc::testing::tiny_random(3000 + seed);
    ModelOptions mo;
    mo.beta = 0.25 * static_cast<double>(seed % 5);
    mo.priority_extension = seed % 2 == 0;
    mo.mode = seed % 3 == 0 ? TrafficMode::Paper : TrafficMode::Physical;
    if (seed % 4 == 1) mo.max_servers = 2;
    const MipModel m = build_model(inst, mo);
    const std::string lp = export_lp(m);
    const std::string mps = export_mps(m);
    const MipModel from_lp = parse_lp(lp);
    const MipModel from_mps = parse_mps(mps);
    o.expect(from_lp == m && export_lp(from_lp) == lp, "LP round trip on seed " + std::to_string(seed));
    o.expect(from_mps == m && export_mps(from_mps) == mps, "MPS round trip on seed " + std::to_string(seed));
    o.expect(export_mps(from_lp) == mps, "LP and MPS disagree on seed " + std::to_string(seed));
    ++models;

    HeuristicConfig hc;
    hc.mode = mo.mode;
    for (const Provisioning& p :
         {round_robin_place(inst, hc).provisioning, random_place(inst, seed, hc).provisioning}) {
      const std::string doc = dump_solution(p, inst);
      o.expect(load_solution(doc, inst) == p, "solution JSON round trip on seed " + std::to_string(seed));
      ModelOptions wo = mo;
      wo.priority_extension = true;
      const MipModel wm = build_model(inst, wo);
      const VariableValues start = warm_start(wm, inst, wo, p);
      const VariableValues reread = parse_values(values_json(start));
      o.expect(reread == start, "start vector JSON round trip");
      o.expect(ingest_solution(wm, inst, wo, reread) == p, "warm start round trip on seed " + std::to_string(seed));
      ++solutions;
    }
  }
  o.detail += (o.detail.empty() ? "" : " | ") +
              fmt("%g models fixed under LP and MPS, %g provisionings round-tripped", models, solutions);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"queueing formulas vs single-queue simulation", queue_oracle},
      {"resend recursion vs path simulation", resend_oracle},
      {"steep growth of latency and drop probability", steep_growth},
      {"constraint fidelity and corruption detection", constraint_fidelity},
      {"exact solver vs naive enumeration, heuristic direction", exact_oracle},
      {"beta sweep monotonicity and pareto filter", pareto_property},
      {"heuristic runtime and deployment at scale", heuristic_scale},
      {"traffic arithmetic", traffic_arithmetic},
      {"round trips", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %zu %s: %s (%.1fs)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
