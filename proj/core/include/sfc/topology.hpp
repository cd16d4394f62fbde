#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/error.hpp"

namespace sfc {

/// Dense index of a node inside one Topology. Indices follow the
/// lexicographic order of node ids, so iterating 0..size() visits nodes in
/// id order.
using NodeIndex = std::uint32_t;

enum class NodeKind : std::uint8_t { Switch, Server };

/// One node as it appears in a topology document.
struct NodeSpec {
  std::string id;
  NodeKind kind = NodeKind::Switch;
  std::optional<std::string> parent;
  double mu = 0.0;          // switches only, packets/s
  std::string server_type;  // servers only

  bool operator==(const NodeSpec&) const = default;
};

class TopologyError : public InputError {
 public:
  enum class Kind {
    Schema,
    DuplicateId,
    UnknownParent,
    Cycle,
    ServerNotLeaf,
    MissingRate,
    RootNotSwitch,
    NoServers,
  };

  TopologyError(Kind kind, std::string node, const std::string& message)
      : InputError(message), kind_(kind), node_(std::move(node)) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& node() const noexcept { return node_; }

 private:
  Kind kind_;
  std::string node_;
};

/// Rooted tree of switches and servers. Immutable once built.
class Topology {
 public:
  /// Validates and builds a tree. Throws TopologyError naming the offending
  /// node on any violation.
  static Topology build(std::vector<NodeSpec> nodes, const std::string& root);

  std::size_t size() const noexcept { return ids_.size(); }
  NodeIndex root() const noexcept { return root_; }

  const std::string& id(NodeIndex n) const { return ids_.at(n); }
  std::optional<NodeIndex> find(std::string_view id) const;
  /// Like find() but throws InputError for unknown ids.
  NodeIndex index(std::string_view id) const;

  NodeKind kind(NodeIndex n) const { return kinds_.at(n); }
  bool is_server(NodeIndex n) const { return kinds_.at(n) == NodeKind::Server; }
  std::optional<NodeIndex> parent(NodeIndex n) const;
  std::span<const NodeIndex> children(NodeIndex n) const { return children_.at(n); }
  int depth(NodeIndex n) const { return depth_.at(n); }
  double mu(NodeIndex n) const { return mu_.at(n); }
  const std::string& server_type(NodeIndex n) const { return server_type_.at(n); }

  std::span<const NodeIndex> servers() const noexcept { return servers_; }
  std::span<const NodeIndex> switches() const noexcept { return switches_; }

  /// Switches with at least one server child (top-of-rack), in id order.
  std::vector<NodeIndex> tors() const;
  /// Switches directly below the root, in id order.
  std::vector<NodeIndex> aggregation_switches() const;
  /// Number of servers in the subtree of n.
  std::size_t leaf_count(NodeIndex n) const { return leaf_count_.at(n); }

  /// Nodes on the unique tree path from `from` to `to`, excluding `from` and
  /// including `to`. Empty when from == to.
  std::vector<NodeIndex> path(NodeIndex from, NodeIndex to) const;
  void append_path(NodeIndex from, NodeIndex to, std::vector<NodeIndex>& out) const;
  std::vector<std::string> path(std::string_view from, std::string_view to) const;

  /// Copy of this topology without the listed switches and everything below
  /// them.
  Topology subnetwork(const std::set<std::string>& removed) const;

  std::vector<NodeSpec> specs() const;

  bool operator==(const Topology& other) const { return specs() == other.specs() && root_ == other.root_; }

 private:
  Topology() = default;

  std::vector<std::string> ids_;
  std::vector<NodeKind> kinds_;
  std::vector<std::int64_t> parent_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<int> depth_;
  std::vector<double> mu_;
  std::vector<std::string> server_type_;
  std::vector<std::size_t> leaf_count_;
  std::vector<NodeIndex> servers_;
  std::vector<NodeIndex> switches_;
  NodeIndex root_ = 0;
};

/// Parses and validates a topology JSON document.
Topology load_topology(std::string_view document);
std::string dump_topology(const Topology& topology);

}  // namespace sfc
