#include "sfc/latency.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json_util.hpp"

namespace sfc {

namespace {

void validate(const QueueParams& q) {
  if (!(q.service_rate > 0.0)) throw InputError("queue: service rate must be positive");
  if (q.capacity < 1) throw InputError("queue: capacity must be at least 1");
  if (!(q.arrival_rate >= 0.0)) throw InputError("queue: arrival rate must be non-negative");
}

}  // namespace

double node_latency(const QueueParams& q) {
  validate(q);
  const double lambda = q.arrival_rate;
  if (lambda == 0.0) return 1.0 / q.service_rate;
  const double rho = q.utilization();
  const double k = q.capacity;
  if (std::abs(rho - 1.0) < kUnityBand) return (k + 1.0) / (2.0 * lambda);

  const double log_rho = std::log(rho);
  const double a = 1.0 + k * (1.0 - rho);
  if (rho < 1.0) {
    const double rho_k = std::exp(k * log_rho);
    const double numerator = rho - a * rho_k * rho;
    const double denominator = lambda * (1.0 - rho) * -std::expm1(k * log_rho);
    return numerator / denominator;
  }
  // Overloaded: scale numerator and denominator by rho^-K to stay finite.
  const double inv_k = std::exp(-k * log_rho);
  return rho * (inv_k - a) / (lambda * (1.0 - rho) * (inv_k - 1.0));
}

double drop_probability(const QueueParams& q) {
  validate(q);
  const double rho = q.utilization();
  if (rho == 0.0) return 0.0;
  const double k = q.capacity;
  if (std::abs(rho - 1.0) < kUnityBand) return 1.0 / (k + 1.0);
  const double log_rho = std::log(rho);
  if (rho < 1.0) return (1.0 - rho) * std::exp(k * log_rho) / -std::expm1((k + 1.0) * log_rho);
  return (rho - 1.0) / (rho * -std::expm1(-(k + 1.0) * log_rho));
}

double expected_resends(double drop) {
  if (!(drop >= 0.0 && drop < 1.0)) throw std::domain_error("expected_resends: drop probability must lie in [0, 1)");
  return 1.0 / (1.0 - drop);
}

bool is_saturated(const QueueParams& q) { return q.utilization() >= 1.0 + kUnityBand; }

double chain_latency(std::span<const HopCost> path) {
  if (path.empty()) return 0.0;
  double total = path.front().latency;
  for (std::size_t n = 1; n < path.size(); ++n) {
    total = path[n].latency + expected_resends(path[n].drop_probability) * total;
  }
  return total;
}

double chain_latency(std::span<const QueueParams> path) {
  std::vector<HopCost> hops;
  hops.reserve(path.size());
  for (const QueueParams& q : path) {
    if (is_saturated(q)) return kUnbounded;
    hops.push_back({node_latency(q), drop_probability(q)});
  }
  return chain_latency(hops);
}

int LatencyConfig::capacity_for(const Topology& topology, NodeIndex node) const {
  if (auto it = node_capacity.find(topology.id(node)); it != node_capacity.end()) return it->second;
  if (topology.is_server(node)) return server_capacity.value_or(default_capacity);
  return switch_capacity.value_or(default_capacity);
}

LatencyReport evaluate(const Instance& instance, const Provisioning& p, const LatencyConfig& config) {
  const Topology& t = instance.topology();
  const TrafficProfile traffic = compute_traffic(instance, p, config.mode);
  LatencyReport report;

  // Per-node queue figures for every node that carries traffic.
  std::vector<HopCost> cost(t.size());
  std::vector<bool> saturated(t.size(), false);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto n = static_cast<NodeIndex>(i);
    double service = 0.0;
    if (t.is_server(n)) {
      auto v = p.vnf_on(n);
      if (!v) continue;
      service = *instance.gamma(n, *v);
    } else {
      service = t.mu(n);
    }
    const QueueParams q{traffic.b[n], service, config.capacity_for(t, n)};
    NodeStats s;
    s.node = n;
    s.arrival_rate = q.arrival_rate;
    s.service_rate = q.service_rate;
    s.capacity = q.capacity;
    s.utilization = q.utilization();
    s.saturated = is_saturated(q);
    if (s.saturated) {
      s.latency = kUnbounded;
      s.drop_probability = drop_probability(q);
      s.expected_resends = kUnbounded;
      saturated[n] = true;
    } else {
      s.latency = node_latency(q);
      s.drop_probability = drop_probability(q);
      s.expected_resends = expected_resends(s.drop_probability);
      cost[n] = {s.latency, s.drop_probability};
    }
    if (q.arrival_rate > 0.0) report.nodes.push_back(s);
  }

  // Expected latency over Markov-split routes: the recursion is affine in the
  // latency so far, so expectations propagate per (position, server) state.
  struct State {
    double mass = 0.0;
    double weighted = 0.0;  // mass * E[T | state]
  };
  std::vector<NodeIndex> hops;
  auto traverse = [&](State s, NodeIndex from, NodeIndex to, bool hop, bool& unbounded) {
    hops.clear();
    if (hop) {
      append_hop(t, from, to, hops);
    } else {
      t.append_path(from, to, hops);
    }
    for (NodeIndex n : hops) {
      if (saturated[n]) unbounded = true;
      const HopCost& h = cost[n];
      s.weighted = s.mass * h.latency + s.weighted / (1.0 - h.drop_probability);
    }
    return s;
  };

  const auto& chains = instance.workload().chains();
  const NodeIndex root = t.root();
  double weight_sum = 0.0;
  double weighted_latency = 0.0;
  bool any_unbounded = false;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    ChainResult r;
    r.chain = c;
    r.deployed = p.deployed[c] != 0;
    if (!r.deployed) {
      report.chains.push_back(r);
      continue;
    }
    bool unbounded = saturated[root];
    const auto& y = p.assignment[c];
    const auto& z = p.transitions[c];
    std::map<NodeIndex, State> states;
    for (const auto& [l, f] : y.front()) {
      if (f <= 0.0) continue;
      State start{f, f * cost[root].latency};
      states[l] = traverse(start, root, l, false, unbounded);
    }
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      std::map<NodeIndex, State> next;
      for (const auto& [k, state] : states) {
        auto yk = y[i].find(k);
        const double share = yk == y[i].end() ? 0.0 : yk->second;
        for (auto it = z[i].lower_bound({k, 0}); it != z[i].end() && it->first.first == k; ++it) {
          if (it->second <= 0.0) continue;
          if (share <= 0.0) throw InputError("evaluate: transition out of a server with no assignment");
          const double split = it->second / share;
          const State moved = traverse({state.mass * split, state.weighted * split}, k, it->first.second, true, unbounded);
          State& acc = next[it->first.second];
          acc.mass += moved.mass;
          acc.weighted += moved.weighted;
        }
      }
      states = std::move(next);
    }
    double mass = 0.0;
    double expected = 0.0;
    for (const auto& [l, state] : states) {
      const State out = traverse(state, l, root, false, unbounded);
      mass += out.mass;
      expected += out.weighted;
    }
    r.expected_latency = unbounded ? kUnbounded : (mass > 0.0 ? expected / mass : 0.0);
    any_unbounded = any_unbounded || unbounded;
    weight_sum += chains[c].lambda;
    if (!unbounded) weighted_latency += chains[c].lambda * r.expected_latency;
    report.chains.push_back(r);
  }
  if (any_unbounded) {
    report.overall = kUnbounded;
    report.note = "saturated node on a deployed chain's path";
  } else {
    report.overall = weight_sum > 0.0 ? weighted_latency / weight_sum : 0.0;
  }
  return report;
}

namespace {

detail::json latency_value(double v) {
  if (v == kUnbounded) return "unbounded";
  return v;
}

}  // namespace

std::string latency_json(const LatencyReport& report, const Instance& instance) {
  using detail::json;
  const Topology& t = instance.topology();
  json chains = json::array();
  for (const ChainResult& r : report.chains) {
    json e;
    e["chain"] = instance.workload().chain(r.chain).id;
    e["deployed"] = r.deployed;
    if (r.deployed) {
      e["expected_latency"] = latency_value(r.expected_latency);
      if (r.samples > 0) {
        e["half_width"] = r.half_width;
        e["samples"] = r.samples;
      }
    }
    chains.push_back(std::move(e));
  }
  json nodes = json::array();
  for (const NodeStats& s : report.nodes) {
    nodes.push_back({{"node", t.id(s.node)},
                     {"arrival_rate", s.arrival_rate},
                     {"service_rate", s.service_rate},
                     {"capacity", s.capacity},
                     {"utilization", s.utilization},
                     {"latency", latency_value(s.latency)},
                     {"drop_probability", s.drop_probability},
                     {"expected_resends", latency_value(s.expected_resends)}});
  }
  json doc;
  doc["overall"] = latency_value(report.overall);
  doc["converged"] = report.converged;
  if (!report.note.empty()) doc["note"] = report.note;
  doc["chains"] = std::move(chains);
  doc["nodes"] = std::move(nodes);
  return detail::dump(doc);
}

std::string latency_csv(const LatencyReport& report, const Instance& instance) {
  std::ostringstream out;
  out.precision(17);
  out << "chain,expected_latency\n";
  for (const ChainResult& r : report.chains) {
    if (!r.deployed) continue;
    out << instance.workload().chain(r.chain).id << ',';
    if (r.expected_latency == kUnbounded) {
      out << "unbounded";
    } else {
      out << r.expected_latency;
    }
    out << '\n';
  }
  return out.str();
}

std::vector<CurvePoint> queue_curve(double arrival_rate, int capacity, std::span<const double> utilizations) {
  std::vector<CurvePoint> out;
  out.reserve(utilizations.size());
  for (double rho : utilizations) {
    if (!(rho > 0.0)) throw InputError("queue_curve: utilization must be positive");
    const QueueParams q{arrival_rate, arrival_rate / rho, capacity};
    out.push_back({rho, node_latency(q), drop_probability(q)});
  }
  return out;
}

}  // namespace sfc
