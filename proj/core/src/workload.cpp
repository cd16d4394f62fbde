#include "sfc/workload.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"

namespace sfc {

namespace {

std::optional<std::uint32_t> index_of(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - names.begin());
}

void require_unique(const std::vector<std::string>& names, std::string_view what) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw InputError("catalog: empty " + std::string(what) + " name");
    if (!seen.insert(n).second) throw InputError("catalog: duplicate " + std::string(what) + " \"" + n + "\"");
  }
}

}  // namespace

VnfCatalog VnfCatalog::build(std::vector<std::string> server_types, std::vector<std::string> vnf_types,
                             const std::vector<GammaEntry>& gamma) {
  require_unique(server_types, "server type");
  require_unique(vnf_types, "VNF type");
  VnfCatalog c;
  c.server_types_ = std::move(server_types);
  c.vnf_types_ = std::move(vnf_types);
  c.gamma_.assign(c.server_types_.size() * c.vnf_types_.size(), 0.0);
  for (const GammaEntry& e : gamma) {
    auto s = c.find_server_type(e.server_type);
    auto v = c.find_vnf(e.vnf);
    if (!s) throw InputError("catalog: gamma entry references unknown server type \"" + e.server_type + "\"");
    if (!v) throw InputError("catalog: gamma entry references unknown VNF type \"" + e.vnf + "\"");
    if (!(e.rate > 0.0)) {
      throw InputError("catalog: gamma for (" + e.server_type + ", " + e.vnf + ") must be positive");
    }
    double& slot = c.gamma_[*s * c.vnf_types_.size() + *v];
    if (slot != 0.0) throw InputError("catalog: duplicate gamma entry (" + e.server_type + ", " + e.vnf + ")");
    slot = e.rate;
    c.max_gamma_ = std::max(c.max_gamma_, e.rate);
  }
  return c;
}

std::optional<VnfIndex> VnfCatalog::find_vnf(std::string_view name) const { return index_of(vnf_types_, name); }

std::optional<ServerTypeIndex> VnfCatalog::find_server_type(std::string_view name) const {
  return index_of(server_types_, name);
}

std::optional<double> VnfCatalog::gamma(ServerTypeIndex server_type, VnfIndex vnf) const {
  const double g = gamma_.at(server_type * vnf_types_.size() + vnf);
  if (g == 0.0) return std::nullopt;
  return g;
}

std::vector<GammaEntry> VnfCatalog::entries() const {
  std::vector<GammaEntry> out;
  for (std::size_t s = 0; s < server_types_.size(); ++s) {
    for (std::size_t v = 0; v < vnf_types_.size(); ++v) {
      const double g = gamma_[s * vnf_types_.size() + v];
      if (g != 0.0) out.push_back({server_types_[s], vnf_types_[v], g});
    }
  }
  return out;
}

Workload::Workload(std::vector<ServiceChain> chains) : chains_(std::move(chains)) {
  std::set<std::string> ids;
  for (const auto& c : chains_) {
    if (c.id.empty()) throw InputError("workload: chain with empty id");
    if (!ids.insert(c.id).second) throw InputError("workload: duplicate chain id \"" + c.id + "\"");
    if (c.vnfs.empty()) throw InputError("workload: chain \"" + c.id + "\" is empty");
    if (!(c.lambda > 0.0)) throw InputError("workload: chain \"" + c.id + "\" has non-positive lambda");
    if (!(c.priority >= 0.0)) throw InputError("workload: chain \"" + c.id + "\" has negative priority");
    total_rate_ += c.lambda;
  }
}

std::optional<std::size_t> Workload::find(std::string_view id) const {
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    if (chains_[c].id == id) return c;
  }
  return std::nullopt;
}

std::size_t Workload::total_positions() const noexcept {
  std::size_t n = 0;
  for (const auto& c : chains_) n += c.length();
  return n;
}

VnfCatalog load_catalog(std::string_view document) {
  using detail::json;
  constexpr std::string_view what = "catalog";
  const json doc = detail::parse_json(document, what);
  auto names = [&](const char* key) {
    const json& arr = detail::require(doc, key, what);
    if (!arr.is_array()) throw InputError(std::string("catalog: \"") + key + "\" must be an array");
    std::vector<std::string> out;
    for (const json& v : arr) {
      if (!v.is_string()) throw InputError(std::string("catalog: \"") + key + "\" entries must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  std::vector<std::string> server_types = names("server_types");
  std::vector<std::string> vnf_types = names("vnf_types");
  const json& gamma = detail::require(doc, "gamma", what);
  if (!gamma.is_array()) throw InputError("catalog: \"gamma\" must be an array");
  std::vector<GammaEntry> entries;
  for (const json& g : gamma) {
    entries.push_back({detail::require_string(g, "server_type", what), detail::require_string(g, "vnf", what),
                       detail::require_number(g, "rate", what)});
  }
  return VnfCatalog::build(std::move(server_types), std::move(vnf_types), entries);
}

std::string dump_catalog(const VnfCatalog& catalog) {
  using detail::json;
  json doc;
  doc["server_types"] = catalog.server_types();
  doc["vnf_types"] = catalog.vnf_types();
  json gamma = json::array();
  for (const auto& e : catalog.entries()) {
    gamma.push_back({{"server_type", e.server_type}, {"vnf", e.vnf}, {"rate", e.rate}});
  }
  doc["gamma"] = std::move(gamma);
  return detail::dump(doc);
}

Workload load_workload(std::string_view document, const VnfCatalog& catalog) {
  using detail::json;
  constexpr std::string_view what = "workload";
  const json doc = detail::parse_json(document, what);
  const json& chains = detail::require(doc, "chains", what);
  if (!chains.is_array()) throw InputError("workload: \"chains\" must be an array");
  std::vector<ServiceChain> out;
  for (const json& c : chains) {
    ServiceChain chain;
    chain.id = detail::require_string(c, "id", what);
    const json& vnfs = detail::require(c, "vnfs", what);
    if (!vnfs.is_array()) throw InputError("workload: chain \"" + chain.id + "\" field \"vnfs\" must be an array");
    for (const json& v : vnfs) {
      if (!v.is_string()) throw InputError("workload: chain \"" + chain.id + "\" has a non-string VNF");
      const auto name = v.get<std::string>();
      auto idx = catalog.find_vnf(name);
      if (!idx) throw InputError("workload: chain \"" + chain.id + "\" references unknown VNF type \"" + name + "\"");
      chain.vnfs.push_back(*idx);
    }
    chain.lambda = detail::require_number(c, "lambda", what);
    if (auto it = c.find("priority"); it != c.end() && !it->is_null()) {
      if (!it->is_number()) throw InputError("workload: chain \"" + chain.id + "\" has a non-numeric priority");
      chain.priority = it->get<double>();
    }
    out.push_back(std::move(chain));
  }
  return Workload(std::move(out));
}

std::string dump_workload(const Workload& workload, const VnfCatalog& catalog) {
  using detail::json;
  json chains = json::array();
  for (const auto& c : workload.chains()) {
    json vnfs = json::array();
    for (VnfIndex v : c.vnfs) vnfs.push_back(catalog.vnf_types().at(v));
    chains.push_back({{"id", c.id}, {"vnfs", std::move(vnfs)}, {"lambda", c.lambda}, {"priority", c.priority}});
  }
  json doc;
  doc["chains"] = std::move(chains);
  return detail::dump(doc);
}

}  // namespace sfc
