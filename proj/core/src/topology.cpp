#include "sfc/topology.hpp"

#include <algorithm>
#include <unordered_map>

#include "json_util.hpp"

namespace sfc {

namespace {

[[noreturn]] void fail(TopologyError::Kind kind, const std::string& node, const std::string& message) {
  throw TopologyError(kind, node, "topology: " + message);
}

}  // namespace

Topology Topology::build(std::vector<NodeSpec> nodes, const std::string& root) {
  std::sort(nodes.begin(), nodes.end(), [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      fail(TopologyError::Kind::DuplicateId, nodes[i].id, "duplicate node id \"" + nodes[i].id + "\"");
    }
  }

  Topology t;
  const std::size_t n = nodes.size();
  t.ids_.reserve(n);
  for (const auto& spec : nodes) {
    if (spec.id.empty()) fail(TopologyError::Kind::Schema, spec.id, "node with empty id");
    t.ids_.push_back(spec.id);
  }

  auto root_index = t.find(root);
  if (!root_index) fail(TopologyError::Kind::Schema, root, "root \"" + root + "\" is not a listed node");
  t.root_ = *root_index;

  t.kinds_.resize(n);
  t.parent_.assign(n, -1);
  t.children_.resize(n);
  t.mu_.assign(n, 0.0);
  t.server_type_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeSpec& spec = nodes[i];
    t.kinds_[i] = spec.kind;
    if (i == t.root_) {
      if (spec.parent) fail(TopologyError::Kind::Schema, spec.id, "root \"" + spec.id + "\" must not have a parent");
      continue;
    }
    if (!spec.parent) {
      fail(TopologyError::Kind::Schema, spec.id, "node \"" + spec.id + "\" has no parent but is not the root");
    }
    auto p = t.find(*spec.parent);
    if (!p) {
      fail(TopologyError::Kind::UnknownParent, spec.id,
           "node \"" + spec.id + "\" has unknown parent \"" + *spec.parent + "\"");
    }
    t.parent_[i] = *p;
  }

  if (t.kinds_[t.root_] != NodeKind::Switch) {
    fail(TopologyError::Kind::RootNotSwitch, root, "root \"" + root + "\" must be a switch");
  }

  // Every node must reach the root by following parents.
  t.depth_.assign(n, -1);
  t.depth_[t.root_] = 0;
  std::vector<NodeIndex> trail;
  for (std::size_t start = 0; start < n; ++start) {
    trail.clear();
    std::size_t cur = start;
    while (t.depth_[cur] < 0) {
      if (std::find(trail.begin(), trail.end(), cur) != trail.end()) {
        fail(TopologyError::Kind::Cycle, t.ids_[cur], "cycle detected through node \"" + t.ids_[cur] + "\"");
      }
      trail.push_back(static_cast<NodeIndex>(cur));
      cur = static_cast<std::size_t>(t.parent_[cur]);
    }
    int d = t.depth_[cur];
    for (auto it = trail.rbegin(); it != trail.rend(); ++it) t.depth_[*it] = ++d;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (t.parent_[i] >= 0) t.children_[static_cast<std::size_t>(t.parent_[i])].push_back(static_cast<NodeIndex>(i));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const NodeSpec& spec = nodes[i];
    if (spec.kind == NodeKind::Server) {
      if (!t.children_[i].empty()) {
        fail(TopologyError::Kind::ServerNotLeaf, spec.id, "server is not a leaf: \"" + spec.id + "\" has children");
      }
      if (spec.server_type.empty()) {
        fail(TopologyError::Kind::Schema, spec.id, "server \"" + spec.id + "\" has no server_type");
      }
      t.server_type_[i] = spec.server_type;
      t.servers_.push_back(static_cast<NodeIndex>(i));
    } else {
      if (!(spec.mu > 0.0)) {
        fail(TopologyError::Kind::MissingRate, spec.id, "switch \"" + spec.id + "\" is missing a positive mu");
      }
      t.mu_[i] = spec.mu;
      t.switches_.push_back(static_cast<NodeIndex>(i));
    }
  }
  if (t.servers_.empty()) fail(TopologyError::Kind::NoServers, root, "topology has no servers");

  t.leaf_count_.assign(n, 0);
  std::vector<NodeIndex> by_depth(n);
  for (std::size_t i = 0; i < n; ++i) by_depth[i] = static_cast<NodeIndex>(i);
  std::stable_sort(by_depth.begin(), by_depth.end(),
                   [&](NodeIndex a, NodeIndex b) { return t.depth_[a] > t.depth_[b]; });
  for (NodeIndex v : by_depth) {
    if (t.kinds_[v] == NodeKind::Server) t.leaf_count_[v] = 1;
    if (t.parent_[v] >= 0) t.leaf_count_[static_cast<std::size_t>(t.parent_[v])] += t.leaf_count_[v];
  }
  return t;
}

std::optional<NodeIndex> Topology::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - ids_.begin());
}

NodeIndex Topology::index(std::string_view id) const {
  auto found = find(id);
  if (!found) throw InputError("unknown node id \"" + std::string(id) + "\"");
  return *found;
}

std::optional<NodeIndex> Topology::parent(NodeIndex n) const {
  const std::int64_t p = parent_.at(n);
  if (p < 0) return std::nullopt;
  return static_cast<NodeIndex>(p);
}

std::vector<NodeIndex> Topology::tors() const {
  std::vector<NodeIndex> out;
  for (NodeIndex s : switches_) {
    for (NodeIndex c : children_[s]) {
      if (kinds_[c] == NodeKind::Server) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

std::vector<NodeIndex> Topology::aggregation_switches() const {
  std::vector<NodeIndex> out;
  for (NodeIndex c : children_[root_]) {
    if (kinds_[c] == NodeKind::Switch) out.push_back(c);
  }
  return out;
}

void Topology::append_path(NodeIndex from, NodeIndex to, std::vector<NodeIndex>& out) const {
  if (from >= size() || to >= size()) throw InputError("path: node index out of range");
  // Climb from both ends to the lowest common ancestor.
  NodeIndex a = from;
  NodeIndex b = to;
  thread_local std::vector<NodeIndex> down;
  down.clear();
  while (depth_[b] > depth_[a]) {
    down.push_back(b);
    b = static_cast<NodeIndex>(parent_[b]);
  }
  while (depth_[a] > depth_[b]) {
    a = static_cast<NodeIndex>(parent_[a]);
    out.push_back(a);
  }
  while (a != b) {
    down.push_back(b);
    b = static_cast<NodeIndex>(parent_[b]);
    a = static_cast<NodeIndex>(parent_[a]);
    out.push_back(a);
  }
  out.insert(out.end(), down.rbegin(), down.rend());
}

std::vector<NodeIndex> Topology::path(NodeIndex from, NodeIndex to) const {
  std::vector<NodeIndex> out;
  append_path(from, to, out);
  return out;
}

std::vector<std::string> Topology::path(std::string_view from, std::string_view to) const {
  std::vector<std::string> out;
  for (NodeIndex v : path(index(from), index(to))) out.push_back(ids_[v]);
  return out;
}

Topology Topology::subnetwork(const std::set<std::string>& removed) const {
  std::vector<bool> drop(size(), false);
  for (const auto& id : removed) {
    NodeIndex v = index(id);
    if (v == root_) throw InputError("subnetwork: cannot remove the root \"" + id + "\"");
    if (kinds_[v] != NodeKind::Switch) throw InputError("subnetwork: \"" + id + "\" is not a switch");
    drop[v] = true;
  }
  // Parents precede children in depth order; propagate removal downward.
  std::vector<NodeIndex> order(size());
  for (std::size_t i = 0; i < size(); ++i) order[i] = static_cast<NodeIndex>(i);
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) { return depth_[a] < depth_[b]; });
  for (NodeIndex v : order) {
    if (parent_[v] >= 0 && drop[static_cast<std::size_t>(parent_[v])]) drop[v] = true;
  }
  std::vector<NodeSpec> kept;
  bool any_server = false;
  for (auto& spec : specs()) {
    if (drop[index(spec.id)]) continue;
    any_server = any_server || spec.kind == NodeKind::Server;
    kept.push_back(std::move(spec));
  }
  if (!any_server) throw InputError("subnetwork: removal leaves zero servers");
  return build(std::move(kept), ids_[root_]);
}

std::vector<NodeSpec> Topology::specs() const {
  std::vector<NodeSpec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    NodeSpec s;
    s.id = ids_[i];
    s.kind = kinds_[i];
    if (parent_[i] >= 0) s.parent = ids_[static_cast<std::size_t>(parent_[i])];
    s.mu = mu_[i];
    s.server_type = server_type_[i];
    out.push_back(std::move(s));
  }
  return out;
}

Topology load_topology(std::string_view document) {
  using detail::json;
  constexpr std::string_view what = "topology";
  const json doc = detail::parse_json(document, what);
  const std::string root = detail::require_string(doc, "root", what);
  const json& nodes = detail::require(doc, "nodes", what);
  if (!nodes.is_array()) throw TopologyError(TopologyError::Kind::Schema, "", "topology: \"nodes\" must be an array");

  std::vector<NodeSpec> specs;
  specs.reserve(nodes.size());
  for (const json& node : nodes) {
    NodeSpec spec;
    try {
      spec.id = detail::require_string(node, "id", what);
      const std::string kind = detail::require_string(node, "kind", what);
      if (kind == "switch") {
        spec.kind = NodeKind::Switch;
      } else if (kind == "server") {
        spec.kind = NodeKind::Server;
      } else {
        throw InputError("topology: node \"" + spec.id + "\" has unknown kind \"" + kind + "\"");
      }
    } catch (const TopologyError&) {
      throw;
    } catch (const InputError& e) {
      throw TopologyError(TopologyError::Kind::Schema, spec.id, e.what());
    }
    if (auto it = node.find("parent"); it != node.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw TopologyError(TopologyError::Kind::Schema, spec.id,
                            "topology: node \"" + spec.id + "\" has a non-string parent");
      }
      spec.parent = it->get<std::string>();
    }
    if (spec.kind == NodeKind::Switch) {
      if (auto it = node.find("mu"); it != node.end()) {
        if (!it->is_number()) {
          throw TopologyError(TopologyError::Kind::Schema, spec.id,
                              "topology: switch \"" + spec.id + "\" has a non-numeric mu");
        }
        spec.mu = it->get<double>();
      }
    } else {
      if (auto it = node.find("server_type"); it != node.end()) {
        if (!it->is_string()) {
          throw TopologyError(TopologyError::Kind::Schema, spec.id,
                              "topology: server \"" + spec.id + "\" has a non-string server_type");
        }
        spec.server_type = it->get<std::string>();
      }
    }
    specs.push_back(std::move(spec));
  }
  return Topology::build(std::move(specs), root);
}

std::string dump_topology(const Topology& topology) {
  using detail::json;
  json doc;
  doc["root"] = topology.id(topology.root());
  json nodes = json::array();
  for (const NodeSpec& s : topology.specs()) {
    json node;
    node["id"] = s.id;
    node["kind"] = s.kind == NodeKind::Switch ? "switch" : "server";
    node["parent"] = s.parent ? json(*s.parent) : json(nullptr);
    if (s.kind == NodeKind::Switch) {
      node["mu"] = s.mu;
    } else {
      node["server_type"] = s.server_type;
    }
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  return detail::dump(doc);
}

}  // namespace sfc
