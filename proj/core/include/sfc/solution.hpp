#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sfc/instance.hpp"

namespace sfc {

/// How the per-node traffic rates b_k are derived from a provisioning.
///
/// Physical: a node carries a chain's traffic only when one of the chain's
/// hops traverses it; the root additionally counts the external ingress.
/// Paper: every non-root node also carries each deployed chain's base rate,
/// as if every chain entered each node once more.
enum class TrafficMode : std::uint8_t { Physical, Paper };

std::string_view to_string(TrafficMode mode);
TrafficMode parse_traffic_mode(std::string_view text);

/// Equality constraints and bounds are checked to this absolute tolerance,
/// scaled by max(1, |value|) for traffic rates.
inline constexpr double kFeasibilityTolerance = 1e-6;

using ServerFractions = std::map<NodeIndex, double>;
using TransitionFractions = std::map<std::pair<NodeIndex, NodeIndex>, double>;

/// A complete provisioning decision. Positions are 0-based here and 1-based
/// in documents.
struct Provisioning {
  /// VNF types placed on each node (indexed by NodeIndex). A valid solution
  /// has at most one entry per server and none on switches.
  std::vector<std::vector<VnfIndex>> placement;
  /// assignment[c][i] : server -> fraction of position i of chain c.
  std::vector<std::vector<ServerFractions>> assignment;
  /// transitions[c][i] : (from, to) -> fraction of the hop i -> i+1.
  std::vector<std::vector<TransitionFractions>> transitions;
  /// Deployment flag per chain.
  std::vector<std::uint8_t> deployed;

  /// Correctly sized, nothing placed. Chains are marked deployed or not.
  static Provisioning empty(const Instance& instance, bool deployed);

  /// The single VNF hosted on `node`, if exactly one is placed there.
  std::optional<VnfIndex> vnf_on(NodeIndex node) const;
  std::size_t servers_used() const;
  std::size_t deployed_count() const;

  /// Puts chain c wholly on the given servers (one per position), with the
  /// implied transitions, and marks it deployed. Does not touch placement.
  void route_unsplit(std::size_t c, const std::vector<NodeIndex>& servers);
  /// Removes every assignment and transition of chain c and marks it
  /// undeployed.
  void clear_chain(std::size_t c);

  bool operator==(const Provisioning&) const = default;
};

struct TrafficProfile {
  std::vector<double> b;            // per node, packets/s
  std::vector<double> utilization;  // per node
  double rho_max = 0.0;
  NodeIndex rho_argmax = 0;
  std::size_t servers_used = 0;
};

/// Per-node traffic of a single chain, added into `b` (sized to the node
/// count). Summing over chains yields compute_traffic's b.
void add_chain_traffic(const Instance& instance, const Provisioning& p, std::size_t chain, TrafficMode mode,
                       std::vector<double>& b);

/// Traffic rates, utilizations, and the maximum utilization. Throws
/// InputError when a server carries traffic without a VNF, or when the
/// provisioning is not shaped for the instance.
TrafficProfile compute_traffic(const Instance& instance, const Provisioning& p, TrafficMode mode);

/// Traffic claimed by an external solver, checked against the recomputed
/// values.
struct ReportedTraffic {
  std::vector<double> b;  // per node
  std::optional<double> rho;
};

struct Violation {
  int constraint = 0;  // 9..19
  std::string chain;
  int position = 0;  // 1-based, 0 when not applicable
  std::string node;
  double magnitude = 0.0;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const noexcept { return violations.empty(); }
  bool has(int constraint) const;
};

FeasibilityReport check_feasibility(const Instance& instance, const Provisioning& p, TrafficMode mode,
                                    const ReportedTraffic* reported = nullptr);

std::string feasibility_json(const FeasibilityReport& report);

/// (1 - beta) * rho + beta * servers_used / server_count.
double objective(const TrafficProfile& traffic, double beta, std::size_t server_count);

struct NodeSequence {
  std::vector<NodeIndex> nodes;  // root, ..., root
  double probability = 1.0;
};

/// Realized end-to-end node sequences of every deployed chain, with Markov
/// split probabilities z / y. Undeployed chains map to an empty list.
std::vector<std::vector<NodeSequence>> node_sequences(const Instance& instance, const Provisioning& p);

/// Appends the nodes visited when moving from server k (position i) to
/// server l (position i+1). A repeated visit to the same server appears
/// again.
void append_hop(const Topology& topology, NodeIndex from, NodeIndex to, std::vector<NodeIndex>& out);

// Solution documents.
Provisioning load_solution(std::string_view document, const Instance& instance);
std::string dump_solution(const Provisioning& p, const Instance& instance);

}  // namespace sfc
