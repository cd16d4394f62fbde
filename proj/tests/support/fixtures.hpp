#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfc/instance.hpp"
#include "sfc/solution.hpp"

namespace sfc::testing {

struct ChainDef {
  std::string id;
  std::vector<std::string> vnfs;
  double lambda = 1.0;
  double priority = 1.0;
};

NodeSpec sw(const std::string& id, const std::string& parent, double mu);
NodeSpec root(const std::string& id, double mu);
NodeSpec srv(const std::string& id, const std::string& parent, const std::string& type = "std");

Instance make_instance(std::vector<NodeSpec> nodes, const std::string& root_id, std::vector<std::string> server_types,
                       std::vector<std::string> vnf_types, const std::vector<GammaEntry>& gamma,
                       const std::vector<ChainDef>& chains);

/// Every server type runs every VNF type at the same rate.
VnfCatalog uniform_catalog(const std::vector<std::string>& server_types, const std::vector<std::string>& vnf_types,
                           double rate);

/// r -> s -> l with one VNF "f" and one chain "c" of rate lambda.
Instance line_instance(double lambda, double mu, double gamma);

/// r -> {t0, t1} -> two servers each (s00, s01, s10, s11), one server type.
Instance two_rack_instance(const std::vector<ChainDef>& chains, const std::vector<std::string>& vnfs, double gamma,
                           double mu = 1000.0);

struct TinySpec {
  std::size_t max_servers = 4;
  std::size_t max_positions = 6;
  /// Server rates large enough that one server absorbs all traffic below
  /// half utilization (so the heuristic never splits).
  bool roomy = false;
};

/// Random tiny instance with integer chain rates and power-of-two service
/// rates, so traffic and utilizations are exact in floating point.
Instance tiny_random(std::uint64_t seed, const TinySpec& spec = {});

/// True when every chain position sits wholly on one server.
bool unsplit(const Provisioning& p);

/// Fresh empty directory under the system temp directory.
std::string temp_dir(const std::string& name);

}  // namespace sfc::testing
