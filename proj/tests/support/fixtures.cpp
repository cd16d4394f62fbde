#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

namespace sfc::testing {

NodeSpec sw(const std::string& id, const std::string& parent, double mu) {
  return {id, NodeKind::Switch, parent, mu, ""};
}

NodeSpec root(const std::string& id, double mu) { return {id, NodeKind::Switch, std::nullopt, mu, ""}; }

NodeSpec srv(const std::string& id, const std::string& parent, const std::string& type) {
  return {id, NodeKind::Server, parent, 0.0, type};
}

Instance make_instance(std::vector<NodeSpec> nodes, const std::string& root_id, std::vector<std::string> server_types,
                       std::vector<std::string> vnf_types, const std::vector<GammaEntry>& gamma,
                       const std::vector<ChainDef>& chains) {
  VnfCatalog catalog = VnfCatalog::build(std::move(server_types), std::move(vnf_types), gamma);
  std::vector<ServiceChain> out;
  for (const ChainDef& d : chains) {
    ServiceChain c;
    c.id = d.id;
    for (const std::string& v : d.vnfs) c.vnfs.push_back(catalog.find_vnf(v).value());
    c.lambda = d.lambda;
    c.priority = d.priority;
    out.push_back(std::move(c));
  }
  return Instance(Topology::build(std::move(nodes), root_id), std::move(catalog), Workload(std::move(out)));
}

VnfCatalog uniform_catalog(const std::vector<std::string>& server_types, const std::vector<std::string>& vnf_types,
                           double rate) {
  std::vector<GammaEntry> gamma;
  for (const auto& s : server_types) {
    for (const auto& v : vnf_types) gamma.push_back({s, v, rate});
  }
  return VnfCatalog::build(server_types, vnf_types, gamma);
}

Instance line_instance(double lambda, double mu, double gamma) {
  return make_instance({root("r", mu), sw("s", "r", mu), srv("l", "s")}, "r", {"std"}, {"f"}, {{"std", "f", gamma}},
                       {{"c", {"f"}, lambda}});
}

Instance two_rack_instance(const std::vector<ChainDef>& chains, const std::vector<std::string>& vnfs, double gamma,
                           double mu) {
  std::vector<GammaEntry> g;
  for (const auto& v : vnfs) g.push_back({"std", v, gamma});
  return make_instance({root("r", mu), sw("t0", "r", mu), sw("t1", "r", mu), srv("s00", "t0"), srv("s01", "t0"),
                        srv("s10", "t1"), srv("s11", "t1")},
                       "r", {"std"}, vnfs, g, chains);
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : e_(seed * 0x9E3779B97F4A7C15ull + 7) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(e_() % n); }
  bool coin(double p) { return static_cast<double>(e_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 e_;
};

double pow2_at_least(double v) { return std::exp2(std::ceil(std::log2(std::max(v, 1.0)))); }

}  // namespace

Instance tiny_random(std::uint64_t seed, const TinySpec& spec) {
  Rng rng(seed);
  const std::size_t L = 2 + rng.below(std::max<std::size_t>(spec.max_servers, 2) - 1);
  const std::size_t T = L >= 2 && rng.coin(0.6) ? 2 : 1;
  const bool agg = rng.coin(0.4);
  const std::size_t S = 1 + rng.below(2);
  const std::size_t V = 1 + rng.below(3);

  std::vector<std::string> types;
  for (std::size_t s = 0; s < S; ++s) types.push_back("h" + std::to_string(s));
  std::vector<std::string> vnfs;
  for (std::size_t v = 0; v < V; ++v) vnfs.push_back("f" + std::to_string(v));

  std::vector<ChainDef> chains;
  const std::size_t positions = 1 + rng.below(spec.max_positions);
  std::size_t left = positions;
  double work = 0.0;
  double max_lambda = 0.0;
  while (left > 0) {
    const std::size_t q = std::min(left, 1 + rng.below(3));
    ChainDef c;
    c.id = "c" + std::to_string(chains.size());
    for (std::size_t i = 0; i < q; ++i) c.vnfs.push_back(vnfs[rng.below(V)]);
    c.lambda = static_cast<double>(1 + rng.below(4));
    c.priority = static_cast<double>(1 + rng.below(2));
    work += c.lambda * static_cast<double>(q);
    max_lambda = std::max(max_lambda, c.lambda);
    chains.push_back(std::move(c));
    left -= q;
  }

  std::vector<GammaEntry> gamma;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t v = 0; v < V; ++v) {
      if (s > 0 && rng.coin(0.25)) continue;  // some pairs undefined on the second type
      double rate = spec.roomy ? pow2_at_least(2.0 * work) * (rng.coin(0.5) ? 2.0 : 1.0)
                               : pow2_at_least(max_lambda) * std::exp2(static_cast<double>(rng.below(4)));
      gamma.push_back({types[s], vnfs[v], rate});
    }
  }

  const double mu_base = pow2_at_least(2.0 * work);
  auto mu = [&] { return mu_base * std::exp2(static_cast<double>(rng.below(3))); };
  std::vector<NodeSpec> nodes{root("r", mu())};
  const std::string tor_parent = agg ? "a0" : "r";
  if (agg) nodes.push_back(sw("a0", "r", mu()));
  for (std::size_t t = 0; t < T; ++t) nodes.push_back(sw("t" + std::to_string(t), tor_parent, mu()));
  for (std::size_t l = 0; l < L; ++l) {
    nodes.push_back(srv("s" + std::to_string(l), "t" + std::to_string(l % T), types[rng.below(S)]));
  }
  return make_instance(std::move(nodes), "r", types, vnfs, gamma, chains);
}

bool unsplit(const Provisioning& p) {
  for (const auto& chain : p.assignment) {
    for (const auto& y : chain) {
      if (y.size() > 1) return false;
    }
  }
  return true;
}

std::string temp_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("sfcprov_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace sfc::testing
