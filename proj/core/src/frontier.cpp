#include "sfc/frontier.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "json_util.hpp"

namespace sfc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

void annotate(FrontierPoint& pt, const Instance& instance, const Provisioning& p, const LatencyConfig& latency) {
  const TrafficProfile traffic = compute_traffic(instance, p, latency.mode);
  pt.servers_used = traffic.servers_used;
  pt.rho_max = traffic.rho_max;
  pt.expected_latency = evaluate(instance, p, latency).overall;
  const std::size_t n = instance.workload().size();
  pt.deployment_rate = n == 0 ? 1.0 : static_cast<double>(p.deployed_count()) / static_cast<double>(n);
  pt.provisioning = p;
}

void write_number(std::ostream& out, double v) {
  if (v == kUnbounded) {
    out << "inf";
  } else {
    out << v;
  }
}

}  // namespace

std::vector<double> default_betas() {
  std::vector<double> out;
  for (int i = 0; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

std::vector<FrontierPoint> sweep_beta(const Instance& instance, const std::vector<double>& betas,
                                      const ExactOptions& options, const LatencyConfig& latency) {
  std::vector<FrontierPoint> out;
  for (double beta : betas) {
    FrontierPoint pt;
    pt.method = "exact";
    pt.beta = beta;
    const auto start = Clock::now();
    try {
      ExactOptions o = options;
      o.mode = latency.mode;
      const ExactResult r = exact_solve(instance, beta, o);
      pt.solve_time = seconds_since(start);
      if (r.solver.status == SolveStatus::Optimal || r.solver.status == SolveStatus::Feasible) {
        annotate(pt, instance, r.provisioning, latency);
      } else {
        pt.status = std::string(to_string(r.solver.status));
      }
    } catch (const std::exception& e) {
      pt.solve_time = seconds_since(start);
      pt.status = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<FrontierPoint> sweep_beta(const Instance& instance, const std::vector<double>& betas,
                                      const MipBackend& backend, const LatencyConfig& latency,
                                      std::optional<std::size_t> max_servers) {
  std::vector<FrontierPoint> out;
  for (double beta : betas) {
    FrontierPoint pt;
    pt.method = "mip";
    pt.beta = beta;
    const auto start = Clock::now();
    try {
      const ModelOptions mo{beta, false, latency.mode, max_servers};
      const MipModel model = build_model(instance, mo);
      const SolverResult r = backend(model);
      pt.solve_time = seconds_since(start);
      if (r.status == SolveStatus::Optimal || r.status == SolveStatus::Feasible) {
        annotate(pt, instance, ingest_solution(model, instance, mo, r.values), latency);
      } else {
        pt.status = std::string(to_string(r.status));
      }
    } catch (const std::exception& e) {
      pt.solve_time = seconds_since(start);
      pt.status = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

RemovalPlan default_removal_plan(const Topology& topology) {
  std::vector<NodeIndex> aggs = topology.aggregation_switches();
  RemovalPlan plan{{}};
  std::set<std::string> removed;
  for (std::size_t k = 0; k + 1 < aggs.size(); ++k) {
    removed.insert(topology.id(aggs[k]));
    plan.push_back(removed);
  }
  return plan;
}

std::vector<FrontierPoint> heuristic_frontier(const Instance& instance, const RemovalPlan& plan,
                                              const HeuristicConfig& config, const LatencyConfig& latency) {
  std::vector<FrontierPoint> out;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    FrontierPoint pt;
    pt.method = "heuristic";
    pt.removal_index = k;
    pt.removed.assign(plan[k].begin(), plan[k].end());
    const auto start = Clock::now();
    const Instance sub = instance.with_topology(instance.topology().subnetwork(plan[k]));
    HeuristicConfig cfg = config;
    cfg.mode = latency.mode;
    const PlacementResult r = round_robin_place(sub, cfg);
    pt.solve_time = seconds_since(start);
    annotate(pt, sub, r.provisioning, latency);
    pt.provisioning.reset();  // belongs to the subnetwork, not the instance
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<FrontierPoint> pareto_filter(const std::vector<FrontierPoint>& points) {
  std::vector<FrontierPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const FrontierPoint& p = points[i];
    if (!p.ok()) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      const FrontierPoint& q = points[j];
      if (j == i || !q.ok()) continue;
      const bool no_worse = q.servers_used <= p.servers_used && q.rho_max <= p.rho_max;
      const bool better = q.servers_used < p.servers_used || q.rho_max < p.rho_max;
      const bool earlier_twin = j < i && q.servers_used == p.servers_used && q.rho_max == p.rho_max;
      dominated = (no_worse && better) || earlier_twin;
    }
    if (!dominated) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FrontierPoint& a, const FrontierPoint& b) { return a.servers_used < b.servers_used; });
  return out;
}

void sort_points(std::vector<FrontierPoint>& points) {
  std::stable_sort(points.begin(), points.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.removal_index < b.removal_index;
  });
}

std::string frontier_csv(const std::vector<FrontierPoint>& points, bool timings) {
  std::ostringstream out;
  out.precision(17);
  out << "method,beta,removed,servers_used,rho_max,expected_latency,deployment_rate,solve_time,status\n";
  for (const FrontierPoint& p : points) {
    out << p.method << ',';
    if (p.beta) out << *p.beta;
    out << ',';
    for (std::size_t k = 0; k < p.removed.size(); ++k) out << (k ? ";" : "") << p.removed[k];
    out << ',' << p.servers_used << ',';
    write_number(out, p.rho_max);
    out << ',';
    write_number(out, p.expected_latency);
    out << ',';
    write_number(out, p.deployment_rate);
    out << ',';
    if (timings) out << p.solve_time;
    std::string status = p.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << ',' << status << '\n';
  }
  return out.str();
}

std::string frontier_json(const std::vector<FrontierPoint>& points, bool timings) {
  detail::json doc = detail::json::array();
  for (const FrontierPoint& p : points) {
    detail::json j;
    j["method"] = p.method;
    j["beta"] = p.beta ? detail::json(*p.beta) : detail::json(nullptr);
    j["removed"] = p.removed;
    j["servers_used"] = p.servers_used;
    j["rho_max"] = p.rho_max;
    if (p.expected_latency == kUnbounded) {
      j["expected_latency"] = "unbounded";
    } else {
      j["expected_latency"] = p.expected_latency;
    }
    j["deployment_rate"] = p.deployment_rate;
    if (timings) j["solve_time"] = p.solve_time;
    j["status"] = p.status;
    doc.push_back(std::move(j));
  }
  return detail::dump(doc);
}

std::map<std::string, std::string> plot_data(const std::vector<FrontierPoint>& points) {
  std::vector<const FrontierPoint*> ok;
  for (const FrontierPoint& p : points) {
    if (p.ok()) ok.push_back(&p);
  }
  auto table = [&](const char* header, auto x, auto y) {
    std::vector<std::pair<double, double>> rows;
    for (const FrontierPoint* p : ok) rows.push_back({x(*p), y(*p)});
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream out;
    out.precision(17);
    out << "# " << header << '\n';
    for (const auto& [a, b] : rows) {
      write_number(out, a);
      out << ' ';
      write_number(out, b);
      out << '\n';
    }
    return out.str();
  };
  auto servers = [](const FrontierPoint& p) { return static_cast<double>(p.servers_used); };
  auto rho = [](const FrontierPoint& p) { return p.rho_max; };
  auto lat = [](const FrontierPoint& p) { return p.expected_latency; };
  return {
      {"servers_rho.dat", table("servers_used rho_max", servers, rho)},
      {"servers_latency.dat", table("servers_used expected_latency", servers, lat)},
      {"rho_latency.dat", table("rho_max expected_latency", rho, lat)},
  };
}

}  // namespace sfc
