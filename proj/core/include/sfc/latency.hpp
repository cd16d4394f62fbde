#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfc/solution.hpp"

namespace sfc {

/// Parameters of one finite-buffer M/M/1/K node: Poisson arrivals, one
/// exponential server, room for `capacity` packets including the one in
/// service.
struct QueueParams {
  double arrival_rate = 0.0;  // packets/s
  double service_rate = 1.0;  // packets/s
  int capacity = 100;

  double utilization() const noexcept { return arrival_rate / service_rate; }
};

/// Width of the band around utilization 1 where the closed forms switch to
/// their analytic limits.
inline constexpr double kUnityBand = 1e-6;

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Expected time an accepted packet spends at the node (queueing plus
/// service), in seconds.
double node_latency(const QueueParams& q);

/// Probability that an arriving packet finds the node full and is dropped.
double drop_probability(const QueueParams& q);

/// Expected number of transmission attempts until a packet gets through a
/// node that drops with probability `drop`. Throws std::domain_error unless
/// 0 <= drop < 1.
double expected_resends(double drop);

/// True when the node is overloaded beyond the unity band; latency is then
/// undefined.
bool is_saturated(const QueueParams& q);

/// Latency and drop probability of one node on an end-to-end path.
struct HopCost {
  double latency = 0.0;
  double drop_probability = 0.0;
};

/// Expected end-to-end latency over a node sequence when a drop at node n
/// resends the packet from the first node. The first node never drops.
double chain_latency(std::span<const HopCost> path);

/// Same, from queue parameters. Returns kUnbounded if any node is saturated.
double chain_latency(std::span<const QueueParams> path);

struct LatencyConfig {
  int default_capacity = 100;
  std::optional<int> switch_capacity;
  std::optional<int> server_capacity;
  std::map<std::string, int> node_capacity;  // by node id, highest precedence
  TrafficMode mode = TrafficMode::Physical;

  int capacity_for(const Topology& topology, NodeIndex node) const;
};

struct NodeStats {
  NodeIndex node = 0;
  double arrival_rate = 0.0;
  double service_rate = 0.0;
  int capacity = 0;
  double utilization = 0.0;
  double latency = 0.0;  // tau_n
  double drop_probability = 0.0;
  double expected_resends = 1.0;
  bool saturated = false;
};

struct ChainResult {
  std::size_t chain = 0;
  bool deployed = false;
  double expected_latency = 0.0;  // kUnbounded when a node on the path is saturated
  double half_width = 0.0;        // simulation only
  std::uint64_t samples = 0;      // simulation only
};

struct LatencyReport {
  std::vector<ChainResult> chains;
  double overall = 0.0;  // rate-weighted over deployed chains
  std::vector<NodeStats> nodes;  // nodes carrying traffic, in id order
  bool converged = true;         // simulation only
  std::string note;

  bool unbounded() const noexcept { return overall == kUnbounded; }
};

/// Analytic expected latency of every deployed chain and the overall
/// rate-weighted mean.
LatencyReport evaluate(const Instance& instance, const Provisioning& p, const LatencyConfig& config);

std::string latency_json(const LatencyReport& report, const Instance& instance);
std::string latency_csv(const LatencyReport& report, const Instance& instance);

struct CurvePoint {
  double utilization;
  double latency;
  double drop_probability;
};

/// Latency and drop probability of a single node with fixed arrival rate as
/// the service rate varies to hit each utilization.
std::vector<CurvePoint> queue_curve(double arrival_rate, int capacity, std::span<const double> utilizations);

}  // namespace sfc
