#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sfc/exact.hpp"
#include "sfc/heuristic.hpp"
#include "sfc/latency.hpp"

namespace sfc {

struct FrontierPoint {
  std::string method;  // heuristic | random | mip | exact
  std::optional<double> beta;
  std::size_t removal_index = 0;  // heuristic points: position in the removal plan
  std::vector<std::string> removed;
  std::size_t servers_used = 0;
  double rho_max = 0.0;
  double expected_latency = 0.0;
  double deployment_rate = 0.0;
  double solve_time = 0.0;
  std::string status = "ok";  // or the failure reason
  std::optional<Provisioning> provisioning;

  bool ok() const { return status == "ok"; }
};

/// Default grid {0, 0.1, ..., 1}.
std::vector<double> default_betas();

/// One point per beta from the built-in exact solver.
std::vector<FrontierPoint> sweep_beta(const Instance& instance, const std::vector<double>& betas,
                                      const ExactOptions& options, const LatencyConfig& latency);

/// One point per beta from an external backend; failures are recorded and
/// the sweep continues.
std::vector<FrontierPoint> sweep_beta(const Instance& instance, const std::vector<double>& betas,
                                      const MipBackend& backend, const LatencyConfig& latency,
                                      std::optional<std::size_t> max_servers = std::nullopt);

using RemovalPlan = std::vector<std::set<std::string>>;

/// Removes aggregation switches cumulatively, left to right: {}, {a0},
/// {a0, a1}, ... keeping at least one.
RemovalPlan default_removal_plan(const Topology& topology);

std::vector<FrontierPoint> heuristic_frontier(const Instance& instance, const RemovalPlan& plan,
                                              const HeuristicConfig& config, const LatencyConfig& latency);

/// Points not dominated in (servers_used, rho_max), stable-sorted by
/// servers_used. Failed points and exact duplicates are dropped.
std::vector<FrontierPoint> pareto_filter(const std::vector<FrontierPoint>& points);

/// Orders by method, then beta, then removal index.
void sort_points(std::vector<FrontierPoint>& points);

std::string frontier_csv(const std::vector<FrontierPoint>& points, bool timings = false);
std::string frontier_json(const std::vector<FrontierPoint>& points, bool timings = false);

/// Plot-ready two-column tables keyed by file name: servers_rho.dat,
/// servers_latency.dat, rho_latency.dat.
std::map<std::string, std::string> plot_data(const std::vector<FrontierPoint>& points);

}  // namespace sfc
