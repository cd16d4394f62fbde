#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "sfc/exact.hpp"
#include "sfc/frontier.hpp"
#include "sfc/gen.hpp"
#include "sfc/heuristic.hpp"
#include "sfc/latency.hpp"
#include "sfc/mip.hpp"
#include "sfc/simulation.hpp"

namespace sfc::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  std::cout << "wrote " << path.string() << '\n';
}

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

struct Common {
  std::string instance = env_or("SFCPROV_INSTANCE", ".");
  std::string out = env_or("SFCPROV_OUT", ".");
  std::string mode = "physical";
  bool timings = false;

  TrafficMode traffic_mode() const { return parse_traffic_mode(mode); }
  fs::path path(const std::string& name) const { return fs::path(out) / name; }
};

void add_common(CLI::App* app, Common& c, bool with_instance = true) {
  if (with_instance) {
    app->add_option("--instance", c.instance, "Instance directory (topology.json, catalog.json, workload.json)")
        ->capture_default_str();
  }
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
  app->add_option("--mode", c.mode, "Traffic model: physical or paper")->capture_default_str();
  app->add_flag("--timings", c.timings, "Include wall-clock timings in reports");
}

struct QueueFlags {
  int k = 100;
  std::optional<int> switch_k;
  std::optional<int> server_k;

  LatencyConfig config(TrafficMode mode) const {
    if (k < 1 || (switch_k && *switch_k < 1) || (server_k && *server_k < 1)) {
      throw InputError("queue capacities must be at least 1");
    }
    LatencyConfig c;
    c.default_capacity = k;
    c.switch_capacity = switch_k;
    c.server_capacity = server_k;
    c.mode = mode;
    return c;
  }
};

void add_queue(CLI::App* app, QueueFlags& q) {
  app->add_option("--k", q.k, "Queue capacity K of every node")->capture_default_str();
  app->add_option("--switch-k", q.switch_k, "Queue capacity of switches");
  app->add_option("--server-k", q.server_k, "Queue capacity of servers");
}

struct HeuristicFlags {
  double initial = 0.5;
  double step = 0.1;
  double max = 0.99;
  std::string order = "priority-then-lambda";
  int max_rejections = 100;

  HeuristicConfig config(TrafficMode mode, std::uint64_t seed) const {
    HeuristicConfig c;
    c.initial_util_limit = initial;
    c.limit_step = step;
    c.limit_max = max;
    c.chain_order = parse_chain_order(order);
    c.seed = seed;
    c.max_rejections = max_rejections;
    c.mode = mode;
    c.validate();
    return c;
  }
};

void add_heuristic(CLI::App* app, HeuristicFlags& h) {
  app->add_option("--limit-initial", h.initial, "Initial utilization limit")->capture_default_str();
  app->add_option("--limit-step", h.step, "Utilization limit increment")->capture_default_str();
  app->add_option("--limit-max", h.max, "Largest utilization limit")->capture_default_str();
  app->add_option("--order", h.order, "Chain order: priority-then-lambda or input-order")->capture_default_str();
  app->add_option("--max-rejections", h.max_rejections, "Random baseline: draws per chain position")
      ->capture_default_str();
}

struct ModelFlags {
  double beta = 0.0;
  bool priorities = false;
  std::optional<std::size_t> max_servers;

  ModelOptions options(TrafficMode mode) const { return {beta, priorities, mode, max_servers}; }
};

void add_model(CLI::App* app, ModelFlags& m) {
  app->add_option("--beta", m.beta, "Weight of server usage in the objective")->capture_default_str();
  app->add_flag("--priorities", m.priorities, "Enable deployment variables and priority rows");
  app->add_option("--max-servers", m.max_servers, "Budget on the number of servers used");
}

std::vector<double> parse_betas(const std::string& text) {
  if (text.empty()) return default_betas();
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double b = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if (!(b >= 0.0 && b <= 1.0)) throw InputError("beta " + item + " outside [0, 1]");
      out.push_back(b);
    } catch (const std::logic_error&) {
      throw InputError("cannot read beta \"" + item + "\"");
    }
  }
  return out;
}

int feasibility_exit(const FeasibilityReport& report, const Provisioning& p) {
  if (!report.feasible()) return kInfeasible;
  return p.deployed_count() == p.deployed.size() ? kOk : kInfeasible;
}

// gen ----------------------------------------------------------------------

struct GenArgs {
  Common common;
  GenSpec spec;
  std::string spec_file;
};

int cmd_gen(const GenArgs& a) {
  GenSpec spec = a.spec;
  if (!a.spec_file.empty()) spec = parse_gen_spec(read_file(a.spec_file));
  const Instance inst = generate(spec);
  write_instance_dir(inst, a.common.out);
  std::cout << "wrote " << (fs::path(a.common.out) / "topology.json").string() << ", catalog.json, workload.json\n";
  write_file(a.common.path("gen_spec.json"), dump_gen_spec(spec.resolved()));
  return kOk;
}

// place --------------------------------------------------------------------

struct PlaceArgs {
  Common common;
  HeuristicFlags heuristic;
  ModelFlags model;
  std::string method = "round-robin";
  std::uint64_t seed = 1;
  double time_limit = 300.0;
};

int cmd_place(const PlaceArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const TrafficMode mode = a.common.traffic_mode();
  Provisioning p;
  const auto start = Clock::now();
  if (a.method == "round-robin" || a.method == "random") {
    const HeuristicConfig cfg = a.heuristic.config(mode, a.seed);
    const PlacementResult r = a.method == "random" ? random_place(inst, a.seed, cfg) : round_robin_place(inst, cfg);
    p = r.provisioning;
    write_file(a.common.path("placement_log.json"), placement_log_json(r.log, inst));
  } else if (a.method == "exact") {
    ExactOptions o;
    o.max_servers = a.model.max_servers;
    o.time_limit = a.time_limit;
    o.mode = mode;
    const ExactResult r = a.model.priorities ? exact_two_phase(inst, a.model.beta, o) : exact_solve(inst, a.model.beta, o);
    json log;
    log["method"] = "exact";
    log["status"] = to_string(r.solver.status);
    log["objective"] = r.solver.objective;
    log["candidates"] = r.candidates;
    if (a.common.timings) log["wall_time"] = r.solver.wall_time;
    write_file(a.common.path("placement_log.json"), dump(log));
    if (r.solver.status == SolveStatus::Infeasible || r.solver.status == SolveStatus::Timeout) {
      std::cerr << "exact solver: " << to_string(r.solver.status) << '\n';
    }
    p = r.provisioning;
  } else {
    throw InputError("unknown method \"" + a.method + "\" (expected round-robin, random, or exact)");
  }
  const double elapsed = seconds_since(start);
  write_file(a.common.path("solution.json"), dump_solution(p, inst));
  const FeasibilityReport report = check_feasibility(inst, p, mode);
  write_file(a.common.path("feasibility.json"), feasibility_json(report));
  std::cout << "deployed " << p.deployed_count() << "/" << p.deployed.size() << " chains on " << p.servers_used()
            << " servers";
  if (report.feasible()) std::cout << ", rho_max " << compute_traffic(inst, p, mode).rho_max;
  if (a.common.timings) std::cout << ", " << elapsed << " s";
  std::cout << '\n';
  return feasibility_exit(report, p);
}

// export-mip ---------------------------------------------------------------

struct ExportArgs {
  Common common;
  ModelFlags model;
  std::string format = "lp";
  std::string warm_start;
};

int cmd_export(const ExportArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const ModelOptions mo = a.model.options(a.common.traffic_mode());
  const MipModel model = build_model(inst, mo);
  const ModelFormat f = parse_model_format(a.format);
  write_file(a.common.path(f == ModelFormat::Lp ? "model.lp" : "model.mps"), export_model(model, f));
  if (!a.warm_start.empty()) {
    const Provisioning p = load_solution(read_file(a.warm_start), inst);
    write_file(a.common.path("start.json"), values_json(warm_start(model, inst, mo, p)));
  }
  std::cout << model.variables.size() << " variables, " << model.constraints.size() << " constraints\n";
  return kOk;
}

// ingest -------------------------------------------------------------------

struct IngestArgs {
  Common common;
  ModelFlags model;
  std::string values;
};

int cmd_ingest(const IngestArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const ModelOptions mo = a.model.options(a.common.traffic_mode());
  const MipModel model = build_model(inst, mo);
  const VariableValues values = parse_values(read_file(a.values));
  try {
    const Provisioning p = ingest_solution(model, inst, mo, values);
    write_file(a.common.path("solution.json"), dump_solution(p, inst));
    const FeasibilityReport report = check_feasibility(inst, p, mo.mode);
    write_file(a.common.path("feasibility.json"), feasibility_json(report));
    return feasibility_exit(report, p);
  } catch (const FeasibilityMismatch& e) {
    json doc;
    doc["feasible"] = false;
    doc["constraints"] = e.constraints();
    doc["message"] = e.what();
    write_file(a.common.path("feasibility.json"), dump(doc));
    std::cerr << e.what() << '\n';
    return kInfeasible;
  }
}

// evaluate / simulate ------------------------------------------------------

struct EvalArgs {
  Common common;
  QueueFlags queue;
  std::string solution;
  SimulationConfig sim;
};

std::string solution_path(const EvalArgs& a) {
  return a.solution.empty() ? (fs::path(a.common.out) / "solution.json").string() : a.solution;
}

int cmd_evaluate(const EvalArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const Provisioning p = load_solution(read_file(solution_path(a)), inst);
  const TrafficMode mode = a.common.traffic_mode();
  const FeasibilityReport report = check_feasibility(inst, p, mode);
  write_file(a.common.path("feasibility.json"), feasibility_json(report));
  if (!report.feasible()) {
    std::cerr << "solution violates " << report.violations.size() << " constraint(s); see feasibility.json\n";
    return kInfeasible;
  }
  const LatencyReport r = evaluate(inst, p, a.queue.config(mode));
  write_file(a.common.path("latency.json"), latency_json(r, inst));
  write_file(a.common.path("latency.csv"), latency_csv(r, inst));
  std::cout << "expected latency " << (r.unbounded() ? std::string("unbounded") : std::to_string(r.overall)) << " s\n";
  return feasibility_exit(report, p);
}

int cmd_simulate(const EvalArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const Provisioning p = load_solution(read_file(solution_path(a)), inst);
  const TrafficMode mode = a.common.traffic_mode();
  const FeasibilityReport report = check_feasibility(inst, p, mode);
  if (!report.feasible()) {
    write_file(a.common.path("feasibility.json"), feasibility_json(report));
    return kInfeasible;
  }
  const LatencyReport r = simulate(inst, p, a.queue.config(mode), a.sim);
  write_file(a.common.path("simulation.json"), latency_json(r, inst));
  write_file(a.common.path("simulation.csv"), latency_csv(r, inst));
  if (!r.converged) std::cerr << "note: " << r.note << '\n';
  std::cout << "simulated latency " << r.overall << " s\n";
  return feasibility_exit(report, p);
}

// frontier -----------------------------------------------------------------

struct FrontierArgs {
  Common common;
  QueueFlags queue;
  HeuristicFlags heuristic;
  std::string method = "heuristic";
  std::string betas;
  std::vector<std::string> remove;
  double time_limit = 300.0;
  std::uint64_t seed = 1;
};

int cmd_frontier(const FrontierArgs& a) {
  const Instance inst = load_instance_dir(a.common.instance);
  const TrafficMode mode = a.common.traffic_mode();
  const LatencyConfig latency = a.queue.config(mode);
  std::vector<FrontierPoint> points;
  if (a.method == "exact" || a.method == "all") {
    ExactOptions o;
    o.time_limit = a.time_limit;
    o.mode = mode;
    auto more = sweep_beta(inst, parse_betas(a.betas), o, latency);
    points.insert(points.end(), more.begin(), more.end());
  }
  if (a.method == "heuristic" || a.method == "all") {
    RemovalPlan plan;
    if (a.remove.empty()) {
      plan = default_removal_plan(inst.topology());
    } else {
      for (const std::string& entry : a.remove) {
        std::set<std::string> set;
        std::stringstream ss(entry);
        std::string id;
        while (std::getline(ss, id, ';')) {
          if (!id.empty()) set.insert(id);
        }
        plan.push_back(std::move(set));
      }
    }
    auto more = heuristic_frontier(inst, plan, a.heuristic.config(mode, a.seed), latency);
    points.insert(points.end(), more.begin(), more.end());
  }
  if (a.method != "exact" && a.method != "heuristic" && a.method != "all") {
    throw InputError("unknown frontier method \"" + a.method + "\" (expected exact, heuristic, or all)");
  }
  sort_points(points);
  write_file(a.common.path("frontier.csv"), frontier_csv(points, a.common.timings));
  write_file(a.common.path("frontier.json"), frontier_json(points, a.common.timings));
  const auto pareto = pareto_filter(points);
  write_file(a.common.path("pareto.csv"), frontier_csv(pareto, a.common.timings));
  for (const auto& [name, content] : plot_data(pareto)) write_file(a.common.path(name), content);
  const bool failures = std::any_of(points.begin(), points.end(), [](const FrontierPoint& p) {
    return !p.ok() || p.deployment_rate < 1.0;
  });
  return failures ? kInfeasible : kOk;
}

// compare ------------------------------------------------------------------

struct CompareArgs {
  Common common;
  QueueFlags queue;
  HeuristicFlags heuristic;
  std::vector<std::string> instances;
  std::uint64_t seed = 1;
  int random_seeds = 10;
  double time_limit = 300.0;
};

json gap(double heuristic, double exact) {
  if (!(exact > 0.0) || heuristic == kUnbounded || exact == kUnbounded) return nullptr;
  return (heuristic - exact) / exact * 100.0;
}

int cmd_compare(const CompareArgs& a) {
  const TrafficMode mode = a.common.traffic_mode();
  const LatencyConfig latency = a.queue.config(mode);
  std::vector<std::string> dirs = a.instances;
  if (dirs.empty()) dirs.push_back(a.common.instance);
  json rows = json::array();
  bool undeployed = false;
  for (const std::string& dir : dirs) {
    const Instance inst = load_instance_dir(dir);
    json row;
    row["instance"] = fs::path(dir).lexically_normal().string();
    row["servers"] = inst.topology().servers().size();
    row["chains"] = inst.workload().size();

    const auto h_start = Clock::now();
    const PlacementResult h = round_robin_place(inst, a.heuristic.config(mode, a.seed));
    const double h_time = seconds_since(h_start);
    const TrafficProfile ht = compute_traffic(inst, h.provisioning, mode);
    const double h_latency = evaluate(inst, h.provisioning, latency).overall;
    undeployed = undeployed || h.deployment_rate() < 1.0;

    double random_rate = 0.0;
    for (int k = 0; k < a.random_seeds; ++k) {
      random_rate += random_place(inst, a.seed + static_cast<std::uint64_t>(k), a.heuristic.config(mode, a.seed))
                         .deployment_rate();
    }
    random_rate /= std::max(1, a.random_seeds);

    row["deployment_rate_heuristic"] = h.deployment_rate();
    row["deployment_rate_random"] = random_rate;
    row["servers_used_heuristic"] = ht.servers_used;
    row["rho_heuristic"] = ht.rho_max;
    row["latency_heuristic"] = h_latency == kUnbounded ? json("unbounded") : json(h_latency);

    json exact_rho = nullptr;
    json exact_latency = nullptr;
    json rho_gap = nullptr;
    json latency_gap = nullptr;
    std::string note;
    double e_time = 0.0;
    try {
      ExactOptions o;
      o.max_servers = ht.servers_used;
      o.time_limit = a.time_limit;
      o.mode = mode;
      o.deploy = h.provisioning.deployed;
      const ExactResult e = exact_solve(inst, 0.0, o);
      e_time = e.solver.wall_time;
      if (e.solver.status == SolveStatus::Optimal || e.solver.status == SolveStatus::Feasible) {
        const TrafficProfile et = compute_traffic(inst, e.provisioning, mode);
        const double e_latency = evaluate(inst, e.provisioning, latency).overall;
        exact_rho = et.rho_max;
        exact_latency = e_latency == kUnbounded ? json("unbounded") : json(e_latency);
        rho_gap = gap(ht.rho_max, et.rho_max);
        latency_gap = gap(h_latency, e_latency);
        if (e.solver.status == SolveStatus::Feasible) note = "exact search hit the time limit";
      } else {
        note = "exact: " + std::string(to_string(e.solver.status));
      }
    } catch (const UnsupportedError& e) {
      note = e.what();
    }
    row["rho_exact"] = exact_rho;
    row["latency_exact"] = exact_latency;
    row["gap_percent"] = rho_gap;
    row["latency_gap_percent"] = latency_gap;
    if (a.common.timings) {
      row["time_heuristic"] = h_time;
      row["time_exact"] = e_time;
    }
    if (!note.empty()) row["note"] = note;
    rows.push_back(std::move(row));
  }

  write_file(a.common.path("compare.json"), dump(rows));
  std::ostringstream csv;
  csv.precision(17);
  bool header = false;
  for (const json& row : rows) {
    if (!header) {
      bool first = true;
      for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
        if (it.key() == "note") continue;
        csv << (first ? "" : ",") << it.key();
        first = false;
      }
      csv << ",note\n";
      header = true;
    }
    bool first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (it.key() == "note") continue;
      csv << (first ? "" : ",");
      first = false;
      const json& v = it.value();
      if (v.is_null()) continue;
      if (v.is_string()) {
        csv << v.get<std::string>();
      } else if (v.is_number_float()) {
        csv << v.get<double>();
      } else {
        csv << v.dump();
      }
    }
    std::string note = row.contains("note") ? row["note"].get<std::string>() : "";
    std::replace(note.begin(), note.end(), ',', ';');
    csv << ',' << note << '\n';
  }
  write_file(a.common.path("compare.csv"), csv.str());
  return undeployed ? kInfeasible : kOk;
}

// curves -------------------------------------------------------------------

struct CurveArgs {
  Common common;
  double lambda = 10.0;
  int k = 100;
  double step = 0.01;
};

int cmd_curves(const CurveArgs& a) {
  if (!(a.step > 0.0 && a.step < 1.0)) throw InputError("--step must lie in (0, 1)");
  std::vector<double> grid;
  for (int i = 1; i * a.step < 1.0 - 1e-12; ++i) grid.push_back(i * a.step);
  grid.push_back(0.99);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
             grid.end());
  const auto curve = queue_curve(a.lambda, a.k, grid);
  std::ostringstream tau;
  std::ostringstream drop;
  tau.precision(17);
  drop.precision(17);
  tau << "# utilization latency\n";
  drop << "# utilization drop_probability\n";
  for (const CurvePoint& c : curve) {
    tau << c.utilization << ' ' << c.latency << '\n';
    drop << c.utilization << ' ' << c.drop_probability << '\n';
  }
  write_file(a.common.path("curve_latency.dat"), tau.str());
  write_file(a.common.path("curve_drop.dat"), drop.str());
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Service chain provisioning: placement, MIP export, latency evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random instance");
  add_common(g, gen.common, false);
  g->add_option("--servers", gen.spec.servers, "Number of servers (power of two)")->capture_default_str();
  g->add_option("--tors", gen.spec.tors, "TOR switches (0: automatic)")->capture_default_str();
  g->add_option("--aggs", gen.spec.agg_switches, "Aggregation switches (0: automatic)")->capture_default_str();
  g->add_option("--chains", gen.spec.chains, "Number of chains")->capture_default_str();
  g->add_option("--max-chain-len", gen.spec.max_chain_len, "Longest chain")->capture_default_str();
  g->add_option("--vnf-types", gen.spec.vnf_types, "Number of VNF types")->capture_default_str();
  g->add_option("--server-types", gen.spec.server_types, "Number of server types")->capture_default_str();
  g->add_option("--lambda-min", gen.spec.lambda_min, "Smallest chain rate")->capture_default_str();
  g->add_option("--lambda-max", gen.spec.lambda_max, "Largest chain rate")->capture_default_str();
  g->add_option("--load", gen.spec.load, "Target server load")->capture_default_str();
  g->add_option("--mu-headroom", gen.spec.mu_headroom, "Switch rate headroom")->capture_default_str();
  g->add_option("--seed", gen.spec.seed, "Random seed")->capture_default_str();
  g->add_option("--spec", gen.spec_file, "Generator spec as JSON (overrides the flags)");

  PlaceArgs place;
  auto* p = app.add_subcommand("place", "Place and route the chains of an instance");
  add_common(p, place.common);
  add_heuristic(p, place.heuristic);
  add_model(p, place.model);
  p->add_option("--method", place.method, "round-robin, random, or exact")->capture_default_str();
  p->add_option("--seed", place.seed, "Random seed")->capture_default_str();
  p->add_option("--time-limit", place.time_limit, "Exact search time limit in seconds")->capture_default_str();

  ExportArgs exp;
  auto* e = app.add_subcommand("export-mip", "Write the placement MIP as LP or MPS");
  add_common(e, exp.common);
  add_model(e, exp.model);
  e->add_option("--format", exp.format, "lp or mps")->capture_default_str();
  e->add_option("--warm-start", exp.warm_start, "Solution document to emit as a start vector");

  IngestArgs ing;
  auto* i = app.add_subcommand("ingest", "Read solver values back into a solution");
  add_common(i, ing.common);
  add_model(i, ing.model);
  i->add_option("--values", ing.values, "Solver output: name value lines or a JSON object")->required();

  EvalArgs eval;
  auto* v = app.add_subcommand("evaluate", "Expected latency of a solution");
  add_common(v, eval.common);
  add_queue(v, eval.queue);
  v->add_option("--solution", eval.solution, "Solution document (default: <out>/solution.json)");

  EvalArgs sim;
  auto* s = app.add_subcommand("simulate", "Discrete-event simulation of a solution");
  add_common(s, sim.common);
  add_queue(s, sim.queue);
  s->add_option("--solution", sim.solution, "Solution document (default: <out>/solution.json)");
  s->add_option("--horizon", sim.sim.horizon, "Simulated seconds")->capture_default_str();
  s->add_option("--warmup", sim.sim.warmup_fraction, "Fraction of the horizon discarded")->capture_default_str();
  s->add_option("--seed", sim.sim.seed, "Random seed")->capture_default_str();
  s->add_option("--batches", sim.sim.batches, "Batches for confidence intervals")->capture_default_str();

  FrontierArgs fr;
  auto* f = app.add_subcommand("frontier", "Trade-off between servers used and utilization");
  add_common(f, fr.common);
  add_queue(f, fr.queue);
  add_heuristic(f, fr.heuristic);
  f->add_option("--method", fr.method, "exact, heuristic, or all")->capture_default_str();
  f->add_option("--betas", fr.betas, "Comma-separated beta values (default 0,0.1,...,1)");
  f->add_option("--remove", fr.remove, "Switch ids to remove per heuristic point, ';'-separated; repeatable");
  f->add_option("--time-limit", fr.time_limit, "Exact search time limit per beta")->capture_default_str();
  f->add_option("--seed", fr.seed, "Random seed")->capture_default_str();

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Heuristic against the random baseline and the exact optimum");
  add_common(c, cmp.common);
  add_queue(c, cmp.queue);
  add_heuristic(c, cmp.heuristic);
  c->add_option("--instances", cmp.instances, "Instance directories (default: --instance)");
  c->add_option("--seed", cmp.seed, "Random seed")->capture_default_str();
  c->add_option("--random-seeds", cmp.random_seeds, "Random baseline runs per instance")->capture_default_str();
  c->add_option("--time-limit", cmp.time_limit, "Exact search time limit")->capture_default_str();

  CurveArgs cur;
  auto* q = app.add_subcommand("curves", "Latency and drop probability of one queue against utilization");
  add_common(q, cur.common, false);
  q->add_option("--lambda", cur.lambda, "Arrival rate")->capture_default_str();
  q->add_option("--k", cur.k, "Queue capacity")->capture_default_str();
  q->add_option("--step", cur.step, "Utilization grid step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*p) return cmd_place(place);
    if (*e) return cmd_export(exp);
    if (*i) return cmd_ingest(ing);
    if (*v) return cmd_evaluate(eval);
    if (*s) return cmd_simulate(sim);
    if (*f) return cmd_frontier(fr);
    if (*c) return cmd_compare(cmp);
    if (*q) return cmd_curves(cur);
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  } catch (const UnsupportedError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  } catch (const std::filesystem::filesystem_error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kInputError;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

int run(const std::vector<std::string>& argv) {
  std::vector<std::string> copy = argv;
  std::vector<char*> ptrs;
  for (std::string& s : copy) ptrs.push_back(s.data());
  ptrs.push_back(nullptr);
  return run(static_cast<int>(copy.size()), ptrs.data());
}

}  // namespace sfc::cli
