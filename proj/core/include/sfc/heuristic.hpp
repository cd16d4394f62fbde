#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/solution.hpp"

namespace sfc {

enum class ChainOrder : std::uint8_t {
  PriorityThenRate,  // descending priority, then descending lambda, then id
  Input,
};

struct HeuristicConfig {
  double initial_util_limit = 0.5;
  double limit_step = 0.1;
  double limit_max = 0.99;
  ChainOrder chain_order = ChainOrder::PriorityThenRate;
  std::uint64_t seed = 1;   // random baseline only
  int max_rejections = 100;  // random baseline, per chain position
  TrafficMode mode = TrafficMode::Physical;

  /// Throws InputError unless 0 < initial <= max < 1 and step > 0.
  void validate() const;
  /// Utilization limits visited by the escalation, strictly increasing and
  /// ending at limit_max.
  std::vector<double> limit_schedule() const;
};

struct ChainOutcome {
  std::size_t chain = 0;
  bool deployed = false;
  std::optional<NodeIndex> start_tor;
  std::vector<NodeIndex> tors_visited;
  std::optional<double> limit;  // limit in force when the chain was placed
  std::string reason;           // why the chain is undeployed
};

struct PlacementLog {
  std::string method;
  std::vector<double> limits;  // escalation sequence actually visited
  std::vector<ChainOutcome> chains;  // indexed by chain
  std::size_t demotions = 0;         // chains removed by the capacity repair
};

struct PlacementResult {
  Provisioning provisioning;
  PlacementLog log;

  double deployment_rate() const;
};

/// Round-robin placement across top-of-rack switches with a rising
/// per-machine utilization limit.
PlacementResult round_robin_place(const Instance& instance, const HeuristicConfig& config = {});

/// Random placement baseline: every chain position goes to a uniformly drawn
/// server that can take it without exceeding its processing rate.
PlacementResult random_place(const Instance& instance, std::uint64_t seed, const HeuristicConfig& config = {});

std::string placement_log_json(const PlacementLog& log, const Instance& instance);

ChainOrder parse_chain_order(std::string_view text);

}  // namespace sfc
