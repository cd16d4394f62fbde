#include "json_util.hpp"
#include "sfc/solution.hpp"

namespace sfc {

namespace {

using detail::json;
constexpr std::string_view kWhat = "solution";

std::size_t chain_of(const Instance& instance, const json& entry) {
  const std::string id = detail::require_string(entry, "chain", kWhat);
  auto c = instance.workload().find(id);
  if (!c) throw InputError("solution: unknown chain \"" + id + "\"");
  return *c;
}

std::size_t position_of(const json& entry, std::size_t limit, const std::string& chain) {
  const json& i = detail::require(entry, "i", kWhat);
  if (!i.is_number_integer()) throw InputError("solution: position \"i\" must be an integer");
  const auto value = i.get<long long>();
  if (value < 1 || static_cast<std::size_t>(value) > limit) {
    throw InputError("solution: position " + std::to_string(value) + " out of range for chain \"" + chain + "\"");
  }
  return static_cast<std::size_t>(value - 1);
}

const json& array_field(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return empty;
  if (!it->is_array()) throw InputError(std::string("solution: \"") + key + "\" must be an array");
  return *it;
}

}  // namespace

Provisioning load_solution(std::string_view document, const Instance& instance) {
  const json doc = detail::parse_json(document, kWhat);
  if (!doc.is_object()) throw InputError("solution: expected an object");
  const Topology& t = instance.topology();
  const auto& chains = instance.workload().chains();
  Provisioning p = Provisioning::empty(instance, true);

  for (const json& e : array_field(doc, "placement")) {
    const NodeIndex server = t.index(detail::require_string(e, "server", kWhat));
    const std::string vnf = detail::require_string(e, "vnf", kWhat);
    auto v = instance.catalog().find_vnf(vnf);
    if (!v) throw InputError("solution: unknown VNF type \"" + vnf + "\"");
    p.placement[server].push_back(*v);
  }
  for (const json& e : array_field(doc, "assignment")) {
    const std::size_t c = chain_of(instance, e);
    const std::size_t i = position_of(e, chains[c].length(), chains[c].id);
    const NodeIndex server = t.index(detail::require_string(e, "server", kWhat));
    const double f = detail::require_number(e, "fraction", kWhat);
    if (!p.assignment[c][i].emplace(server, f).second) {
      throw InputError("solution: duplicate assignment entry for chain \"" + chains[c].id + "\"");
    }
  }
  for (const json& e : array_field(doc, "transitions")) {
    const std::size_t c = chain_of(instance, e);
    const std::size_t i = position_of(e, chains[c].length() - 1, chains[c].id);
    const NodeIndex from = t.index(detail::require_string(e, "from", kWhat));
    const NodeIndex to = t.index(detail::require_string(e, "to", kWhat));
    const double f = detail::require_number(e, "fraction", kWhat);
    if (!p.transitions[c][i].emplace(std::pair{from, to}, f).second) {
      throw InputError("solution: duplicate transition entry for chain \"" + chains[c].id + "\"");
    }
  }
  for (const json& e : array_field(doc, "deployed")) {
    const std::size_t c = chain_of(instance, e);
    const json& d = detail::require(e, "d", kWhat);
    if (!d.is_number_integer() || (d.get<int>() != 0 && d.get<int>() != 1)) {
      throw InputError("solution: deployment flag must be 0 or 1");
    }
    p.deployed[c] = static_cast<std::uint8_t>(d.get<int>());
  }
  return p;
}

std::string dump_solution(const Provisioning& p, const Instance& instance) {
  const Topology& t = instance.topology();
  const auto& chains = instance.workload().chains();
  const auto& vnfs = instance.catalog().vnf_types();
  json placement = json::array();
  for (std::size_t n = 0; n < p.placement.size(); ++n) {
    for (VnfIndex v : p.placement[n]) {
      placement.push_back({{"server", t.id(static_cast<NodeIndex>(n))}, {"vnf", vnfs.at(v)}});
    }
  }
  json assignment = json::array();
  json transitions = json::array();
  json deployed = json::array();
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < p.assignment[c].size(); ++i) {
      for (const auto& [l, f] : p.assignment[c][i]) {
        assignment.push_back({{"chain", chains[c].id}, {"i", i + 1}, {"server", t.id(l)}, {"fraction", f}});
      }
    }
    for (std::size_t i = 0; i < p.transitions[c].size(); ++i) {
      for (const auto& [kl, f] : p.transitions[c][i]) {
        transitions.push_back({{"chain", chains[c].id},
                               {"i", i + 1},
                               {"from", t.id(kl.first)},
                               {"to", t.id(kl.second)},
                               {"fraction", f}});
      }
    }
    deployed.push_back({{"chain", chains[c].id}, {"d", static_cast<int>(p.deployed[c])}});
  }
  json doc;
  doc["placement"] = std::move(placement);
  doc["assignment"] = std::move(assignment);
  doc["transitions"] = std::move(transitions);
  doc["deployed"] = std::move(deployed);
  return detail::dump(doc);
}

std::string feasibility_json(const FeasibilityReport& report) {
  json violations = json::array();
  for (const Violation& v : report.violations) {
    json e;
    e["constraint"] = v.constraint;
    if (!v.chain.empty()) e["chain"] = v.chain;
    if (v.position > 0) e["i"] = v.position;
    if (!v.node.empty()) e["node"] = v.node;
    e["magnitude"] = v.magnitude;
    e["detail"] = v.detail;
    violations.push_back(std::move(e));
  }
  json doc;
  doc["feasible"] = report.feasible();
  doc["violations"] = std::move(violations);
  return detail::dump(doc);
}

}  // namespace sfc
