#include "sfc/solution.hpp"

#include <algorithm>
#include <cmath>

namespace sfc {

std::string_view to_string(TrafficMode mode) { return mode == TrafficMode::Physical ? "physical" : "paper"; }

TrafficMode parse_traffic_mode(std::string_view text) {
  if (text == "physical") return TrafficMode::Physical;
  if (text == "paper") return TrafficMode::Paper;
  throw InputError("unknown traffic mode \"" + std::string(text) + "\" (expected physical or paper)");
}

Provisioning Provisioning::empty(const Instance& instance, bool deployed) {
  Provisioning p;
  p.placement.resize(instance.topology().size());
  const auto& chains = instance.workload().chains();
  p.assignment.resize(chains.size());
  p.transitions.resize(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    p.assignment[c].resize(chains[c].length());
    p.transitions[c].resize(chains[c].length() - 1);
  }
  p.deployed.assign(chains.size(), deployed ? 1 : 0);
  return p;
}

std::optional<VnfIndex> Provisioning::vnf_on(NodeIndex node) const {
  if (node >= placement.size() || placement[node].size() != 1) return std::nullopt;
  return placement[node].front();
}

std::size_t Provisioning::servers_used() const {
  std::size_t n = 0;
  for (const auto& hosted : placement) n += hosted.empty() ? 0 : 1;
  return n;
}

std::size_t Provisioning::deployed_count() const {
  return static_cast<std::size_t>(std::count(deployed.begin(), deployed.end(), std::uint8_t{1}));
}

void Provisioning::route_unsplit(std::size_t c, const std::vector<NodeIndex>& servers) {
  auto& positions = assignment.at(c);
  if (servers.size() != positions.size()) throw InputError("route_unsplit: wrong number of servers");
  for (std::size_t i = 0; i < servers.size(); ++i) positions[i] = {{servers[i], 1.0}};
  for (std::size_t i = 0; i + 1 < servers.size(); ++i) transitions[c][i] = {{{servers[i], servers[i + 1]}, 1.0}};
  deployed[c] = 1;
}

void Provisioning::clear_chain(std::size_t c) {
  for (auto& y : assignment.at(c)) y.clear();
  for (auto& z : transitions.at(c)) z.clear();
  deployed[c] = 0;
}

namespace {

void check_shape(const Instance& instance, const Provisioning& p) {
  const auto& chains = instance.workload().chains();
  bool ok = p.placement.size() == instance.topology().size() && p.assignment.size() == chains.size() &&
            p.transitions.size() == chains.size() && p.deployed.size() == chains.size();
  for (std::size_t c = 0; ok && c < chains.size(); ++c) {
    ok = p.assignment[c].size() == chains[c].length() && p.transitions[c].size() + 1 == chains[c].length();
  }
  if (!ok) throw InputError("provisioning does not match the instance shape");
  const std::size_t n = instance.topology().size();
  for (const auto& chain_y : p.assignment) {
    for (const auto& y : chain_y) {
      for (const auto& [l, f] : y) {
        if (l >= n) throw InputError("provisioning references an unknown node");
      }
    }
  }
  for (const auto& chain_z : p.transitions) {
    for (const auto& z : chain_z) {
      for (const auto& [kl, f] : z) {
        if (kl.first >= n || kl.second >= n) throw InputError("provisioning references an unknown node");
      }
    }
  }
}

void add_along(const Topology& t, NodeIndex from, NodeIndex to, double amount, std::vector<double>& b) {
  thread_local std::vector<NodeIndex> hops;
  hops.clear();
  t.append_path(from, to, hops);
  for (NodeIndex k : hops) b[k] += amount;
}

std::vector<double> raw_traffic(const Instance& instance, const Provisioning& p, TrafficMode mode) {
  std::vector<double> b(instance.topology().size(), 0.0);
  for (std::size_t c = 0; c < instance.workload().size(); ++c) add_chain_traffic(instance, p, c, mode, b);
  return b;
}

double capacity_of(const Instance& instance, const Provisioning& p, NodeIndex l) {
  double cap = 0.0;
  for (VnfIndex v : p.placement[l]) cap += instance.gamma(l, v).value_or(0.0);
  return cap;
}

bool exceeds(double value, double limit) {
  return value - limit > kFeasibilityTolerance * std::max(1.0, std::abs(limit));
}

}  // namespace

void add_chain_traffic(const Instance& instance, const Provisioning& p, std::size_t c, TrafficMode mode,
                       std::vector<double>& b) {
  const Topology& t = instance.topology();
  const ServiceChain& chain = instance.workload().chain(c);
  const double lambda = chain.lambda;
  const double d = p.deployed.at(c) ? 1.0 : 0.0;
  const NodeIndex r = t.root();

  b[r] += lambda * d;
  if (mode == TrafficMode::Paper && d > 0.0) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k != r) b[k] += lambda * d;
    }
  }
  const auto& y = p.assignment[c];
  for (const auto& [l, f] : y.front()) add_along(t, r, l, lambda * f, b);
  for (const auto& [m, f] : y.back()) add_along(t, m, r, lambda * f, b);
  for (const auto& z : p.transitions[c]) {
    for (const auto& [kl, f] : z) add_along(t, kl.first, kl.second, lambda * f, b);
  }
}

TrafficProfile compute_traffic(const Instance& instance, const Provisioning& p, TrafficMode mode) {
  check_shape(instance, p);
  const Topology& t = instance.topology();
  TrafficProfile out;
  out.b = raw_traffic(instance, p, mode);
  out.utilization.assign(t.size(), 0.0);
  for (NodeIndex n : t.switches()) out.utilization[n] = out.b[n] / t.mu(n);
  for (NodeIndex l : t.servers()) {
    const auto& hosted = p.placement[l];
    if (hosted.size() > 1) throw InputError("server \"" + t.id(l) + "\" hosts more than one VNF");
    if (hosted.empty()) {
      if (out.b[l] > kFeasibilityTolerance) {
        throw InputError("server \"" + t.id(l) + "\" carries traffic but has no VNF placed");
      }
      continue;
    }
    auto g = instance.gamma(l, hosted.front());
    if (!g) {
      throw InputError("server \"" + t.id(l) + "\" hosts VNF \"" + instance.catalog().vnf_types()[hosted.front()] +
                       "\" which its server type cannot run");
    }
    out.utilization[l] = out.b[l] / *g;
  }
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (out.utilization[n] > out.rho_max) {
      out.rho_max = out.utilization[n];
      out.rho_argmax = static_cast<NodeIndex>(n);
    }
  }
  out.servers_used = p.servers_used();
  return out;
}

bool FeasibilityReport::has(int constraint) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.constraint == constraint; });
}

FeasibilityReport check_feasibility(const Instance& instance, const Provisioning& p, TrafficMode mode,
                                    const ReportedTraffic* reported) {
  check_shape(instance, p);
  const Topology& t = instance.topology();
  const auto& chains = instance.workload().chains();
  const auto& vnf_names = instance.catalog().vnf_types();
  constexpr double tol = kFeasibilityTolerance;
  FeasibilityReport report;
  auto add = [&](int id, std::string chain, int position, std::string node, double magnitude, std::string detail) {
    report.violations.push_back({id, std::move(chain), position, std::move(node), magnitude, std::move(detail)});
  };

  // (9) at most one VNF per server, none on switches, only runnable types.
  for (std::size_t n = 0; n < t.size(); ++n) {
    const auto& hosted = p.placement[n];
    if (hosted.empty()) continue;
    const auto node = static_cast<NodeIndex>(n);
    if (!t.is_server(node)) {
      add(9, "", 0, t.id(node), static_cast<double>(hosted.size()), "VNF placed on a switch");
      continue;
    }
    if (hosted.size() > 1) {
      add(9, "", 0, t.id(node), static_cast<double>(hosted.size() - 1), "more than one VNF on a server");
    }
    for (VnfIndex v : hosted) {
      if (!instance.gamma(node, v)) {
        add(9, "", 0, t.id(node), 1.0, "server type cannot run VNF \"" + vnf_names[v] + "\"");
      }
    }
  }

  for (std::size_t c = 0; c < chains.size(); ++c) {
    const ServiceChain& chain = chains[c];
    const double d = p.deployed[c] ? 1.0 : 0.0;
    const auto& y = p.assignment[c];
    const auto& z = p.transitions[c];
    const std::size_t q = chain.length();

    for (std::size_t i = 0; i < q; ++i) {
      double total = 0.0;
      for (const auto& [l, f] : y[i]) {
        total += f;
        if (f < -tol || f > 1.0 + tol) {
          add(11, chain.id, static_cast<int>(i + 1), t.id(l), f < 0 ? -f : f - 1.0, "assignment fraction out of [0,1]");
        }
        const bool hosts = t.is_server(l) && std::find(p.placement[l].begin(), p.placement[l].end(), chain.vnfs[i]) !=
                                                  p.placement[l].end();
        if (f > tol && !hosts) {
          add(10, chain.id, static_cast<int>(i + 1), t.id(l), f,
              "assigned to a node not hosting \"" + vnf_names[chain.vnfs[i]] + "\"");
        }
      }
      if (std::abs(total - d) > tol) {
        add(11, chain.id, static_cast<int>(i + 1), "", std::abs(total - d), "assignment fractions do not sum to d_c");
      }
    }

    for (std::size_t i = 0; i + 1 < q; ++i) {
      double total = 0.0;
      for (const auto& [kl, f] : z[i]) {
        total += f;
        if (f < -tol || f > 1.0 + tol) {
          add(14, chain.id, static_cast<int>(i + 1), t.id(kl.first), f < 0 ? -f : f - 1.0,
              "transition fraction out of [0,1]");
        }
        auto yk = y[i].find(kl.first);
        const double from = yk == y[i].end() ? 0.0 : yk->second;
        if (f - from > tol) add(12, chain.id, static_cast<int>(i + 1), t.id(kl.first), f - from, "z exceeds y_i");
        auto yl = y[i + 1].find(kl.second);
        const double to = yl == y[i + 1].end() ? 0.0 : yl->second;
        if (f - to > tol) add(13, chain.id, static_cast<int>(i + 1), t.id(kl.second), f - to, "z exceeds y_{i+1}");
      }
      if (std::abs(total - d) > tol) {
        add(14, chain.id, static_cast<int>(i + 1), "", std::abs(total - d), "transition fractions do not sum to d_c");
      }
    }

    // (15) per-server flow conservation, aggregated over positions.
    std::map<NodeIndex, double> balance;
    for (const auto& [k, f] : y.front()) balance[k] += f;
    for (const auto& [k, f] : y.back()) balance[k] -= f;
    for (const auto& zi : z) {
      for (const auto& [kl, f] : zi) {
        balance[kl.second] += f;
        balance[kl.first] -= f;
      }
    }
    for (const auto& [k, diff] : balance) {
      if (std::abs(diff) > tol) add(15, chain.id, 0, t.id(k), std::abs(diff), "inflow differs from outflow");
    }
  }

  const std::vector<double> b = raw_traffic(instance, p, mode);
  if (reported) {
    if (reported->b.size() != t.size()) throw InputError("reported traffic does not match the topology size");
    for (std::size_t n = 0; n < t.size(); ++n) {
      const double diff = std::abs(reported->b[n] - b[n]);
      if (diff > tol * std::max(1.0, std::abs(b[n]))) {
        const int id = n == t.root() ? 17 : 16;
        add(id, "", 0, t.id(static_cast<NodeIndex>(n)), diff, "reported traffic rate differs from the recomputed rate");
      }
    }
  }

  double rho = 0.0;
  bool rho_is_server = false;
  NodeIndex rho_node = 0;
  for (NodeIndex n : t.switches()) {
    if (exceeds(b[n], t.mu(n))) add(18, "", 0, t.id(n), b[n] - t.mu(n), "switch rate exceeds mu");
    if (b[n] / t.mu(n) > rho) {
      rho = b[n] / t.mu(n);
      rho_node = n;
      rho_is_server = false;
    }
  }
  for (NodeIndex l : t.servers()) {
    const double cap = capacity_of(instance, p, l);
    if (exceeds(b[l], cap)) add(19, "", 0, t.id(l), b[l] - cap, "server rate exceeds VNF processing rate");
    if (cap > 0.0 && b[l] / cap > rho) {
      rho = b[l] / cap;
      rho_node = l;
      rho_is_server = true;
    }
  }
  if (reported && reported->rho && rho - *reported->rho > tol) {
    add(rho_is_server ? 21 : 20, "", 0, t.id(rho_node), rho - *reported->rho,
        "reported maximum utilization is below the utilization of this node");
  }
  return report;
}

double objective(const TrafficProfile& traffic, double beta, std::size_t server_count) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
  if (server_count == 0) throw InputError("objective: server count must be positive");
  return (1.0 - beta) * traffic.rho_max +
         beta * (static_cast<double>(traffic.servers_used) / static_cast<double>(server_count));
}

void append_hop(const Topology& topology, NodeIndex from, NodeIndex to, std::vector<NodeIndex>& out) {
  if (from == to) {
    out.push_back(to);
  } else {
    topology.append_path(from, to, out);
  }
}

std::vector<std::vector<NodeSequence>> node_sequences(const Instance& instance, const Provisioning& p) {
  check_shape(instance, p);
  const Topology& t = instance.topology();
  const NodeIndex r = t.root();
  std::vector<std::vector<NodeSequence>> out(instance.workload().size());

  for (std::size_t c = 0; c < out.size(); ++c) {
    if (!p.deployed[c]) continue;
    const auto& y = p.assignment[c];
    const auto& z = p.transitions[c];
    const std::size_t q = y.size();

    struct Partial {
      std::vector<NodeIndex> nodes;
      NodeIndex at;
      double probability;
    };
    std::vector<Partial> frontier;
    for (const auto& [l, f] : y.front()) {
      if (f <= 0.0) continue;
      Partial start{{r}, l, f};
      t.append_path(r, l, start.nodes);
      frontier.push_back(std::move(start));
    }
    for (std::size_t i = 0; i + 1 < q; ++i) {
      std::vector<Partial> next;
      for (const Partial& part : frontier) {
        auto yk = y[i].find(part.at);
        const double from_share = yk == y[i].end() ? 0.0 : yk->second;
        for (auto it = z[i].lower_bound({part.at, 0}); it != z[i].end() && it->first.first == part.at; ++it) {
          if (it->second <= 0.0) continue;
          if (from_share <= 0.0) {
            throw InputError("node_sequences: chain \"" + instance.workload().chain(c).id + "\" position " +
                             std::to_string(i + 1) + " has transitions out of \"" + t.id(part.at) +
                             "\" but no assignment there");
          }
          Partial extended{part.nodes, it->first.second, part.probability * it->second / from_share};
          append_hop(t, part.at, it->first.second, extended.nodes);
          next.push_back(std::move(extended));
        }
      }
      frontier = std::move(next);
    }
    for (Partial& part : frontier) {
      t.append_path(part.at, r, part.nodes);
      out[c].push_back({std::move(part.nodes), part.probability});
    }
  }
  return out;
}

}  // namespace sfc
