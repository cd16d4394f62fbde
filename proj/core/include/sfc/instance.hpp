#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfc/topology.hpp"
#include "sfc/workload.hpp"

namespace sfc {

/// A topology, a catalog, and a workload checked against each other: every
/// server type used by the topology exists in the catalog.
class Instance {
 public:
  Instance(Topology topology, VnfCatalog catalog, Workload workload);

  const Topology& topology() const noexcept { return topology_; }
  const VnfCatalog& catalog() const noexcept { return catalog_; }
  const Workload& workload() const noexcept { return workload_; }

  ServerTypeIndex server_type(NodeIndex server) const { return server_type_.at(server); }
  /// Processing rate of `vnf` on `server`, nullopt when the pair is undefined.
  std::optional<double> gamma(NodeIndex server, VnfIndex vnf) const {
    return catalog_.gamma(server_type_.at(server), vnf);
  }

  /// Same catalog and workload on another topology.
  Instance with_topology(Topology topology) const;
  Instance with_workload(Workload workload) const;

 private:
  Topology topology_;
  VnfCatalog catalog_;
  Workload workload_;
  std::vector<ServerTypeIndex> server_type_;  // per node; unused for switches
};

/// Reads the three instance documents from a directory (topology.json,
/// catalog.json, workload.json).
Instance load_instance_dir(const std::string& directory);
void write_instance_dir(const Instance& instance, const std::string& directory);

}  // namespace sfc
