#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/error.hpp"

namespace sfc {

using VnfIndex = std::uint32_t;
using ServerTypeIndex = std::uint32_t;

struct GammaEntry {
  std::string server_type;
  std::string vnf;
  double rate = 0.0;
};

/// VNF types, server types, and the processing rate of each VNF type on each
/// server type (packets/s). Pairs without an entry cannot be placed.
class VnfCatalog {
 public:
  static VnfCatalog build(std::vector<std::string> server_types, std::vector<std::string> vnf_types,
                          const std::vector<GammaEntry>& gamma);

  const std::vector<std::string>& server_types() const noexcept { return server_types_; }
  const std::vector<std::string>& vnf_types() const noexcept { return vnf_types_; }

  std::optional<VnfIndex> find_vnf(std::string_view name) const;
  std::optional<ServerTypeIndex> find_server_type(std::string_view name) const;

  /// Rate of `vnf` on `server_type`, or nullopt when the pair is undefined.
  std::optional<double> gamma(ServerTypeIndex server_type, VnfIndex vnf) const;
  double max_gamma() const noexcept { return max_gamma_; }

  std::vector<GammaEntry> entries() const;

  bool operator==(const VnfCatalog&) const = default;

 private:
  std::vector<std::string> server_types_;
  std::vector<std::string> vnf_types_;
  std::vector<double> gamma_;  // [server_type * |V| + vnf], 0 = undefined
  double max_gamma_ = 0.0;
};

struct ServiceChain {
  std::string id;
  std::vector<VnfIndex> vnfs;  // positions 0..q-1 (documents use 1..q)
  double lambda = 0.0;
  double priority = 1.0;

  std::size_t length() const noexcept { return vnfs.size(); }
  bool operator==(const ServiceChain&) const = default;
};

class Workload {
 public:
  explicit Workload(std::vector<ServiceChain> chains);
  Workload() = default;

  const std::vector<ServiceChain>& chains() const noexcept { return chains_; }
  std::size_t size() const noexcept { return chains_.size(); }
  const ServiceChain& chain(std::size_t c) const { return chains_.at(c); }
  std::optional<std::size_t> find(std::string_view id) const;

  /// Sum of arrival rates of all chains.
  double total_rate() const noexcept { return total_rate_; }
  std::size_t total_positions() const noexcept;

  bool operator==(const Workload&) const = default;

 private:
  std::vector<ServiceChain> chains_;
  double total_rate_ = 0.0;
};

VnfCatalog load_catalog(std::string_view document);
std::string dump_catalog(const VnfCatalog& catalog);

Workload load_workload(std::string_view document, const VnfCatalog& catalog);
std::string dump_workload(const Workload& workload, const VnfCatalog& catalog);

}  // namespace sfc
