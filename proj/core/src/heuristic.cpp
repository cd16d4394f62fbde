#include "sfc/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "json_util.hpp"

namespace sfc {

void HeuristicConfig::validate() const {
  if (!(initial_util_limit > 0.0 && initial_util_limit <= limit_max && limit_max < 1.0)) {
    throw InputError("heuristic: need 0 < initial_util_limit <= limit_max < 1");
  }
  if (!(limit_step > 0.0)) throw InputError("heuristic: limit_step must be positive");
  if (max_rejections < 1) throw InputError("heuristic: max_rejections must be at least 1");
}

std::vector<double> HeuristicConfig::limit_schedule() const {
  validate();
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double limit = initial_util_limit + k * limit_step;
    if (limit >= limit_max - 1e-12) {
      out.push_back(limit_max);
      return out;
    }
    out.push_back(limit);
  }
}

ChainOrder parse_chain_order(std::string_view text) {
  if (text == "priority-then-lambda") return ChainOrder::PriorityThenRate;
  if (text == "input-order") return ChainOrder::Input;
  throw InputError("unknown chain order \"" + std::string(text) + "\"");
}

double PlacementResult::deployment_rate() const {
  if (provisioning.deployed.empty()) return 1.0;
  return static_cast<double>(provisioning.deployed_count()) / static_cast<double>(provisioning.deployed.size());
}

namespace {

constexpr double kEps = 1e-9;

/// Mutable placement state with undo support for one chain at a time.
class PlacementState {
 public:
  explicit PlacementState(const Instance& instance)
      : instance_(instance),
        p_(Provisioning::empty(instance, false)),
        load_(instance.topology().size(), 0.0),
        users_(instance.topology().size(), 0) {}

  const Provisioning& provisioning() const { return p_; }
  Provisioning& provisioning() { return p_; }

  double load(NodeIndex l) const { return load_[l]; }
  std::optional<VnfIndex> hosted(NodeIndex l) const { return p_.vnf_on(l); }

  /// Capacity left under `limit` if `l` can serve `v`, else nullopt.
  std::optional<double> residual(NodeIndex l, VnfIndex v, double limit) const {
    auto h = hosted(l);
    if (h && *h != v) return std::nullopt;
    auto g = instance_.gamma(l, v);
    if (!g) return std::nullopt;
    return *g * limit - load_[l];
  }

  void assign(NodeIndex l, VnfIndex v, double amount) {
    undo_.push_back({l, load_[l], users_[l], p_.placement[l]});
    if (p_.placement[l].empty()) p_.placement[l].push_back(v);
    load_[l] += amount;
    ++users_[l];
  }

  void begin() { undo_.clear(); }
  void rollback() {
    for (auto it = undo_.rbegin(); it != undo_.rend(); ++it) {
      load_[it->server] = it->load;
      users_[it->server] = it->users;
      p_.placement[it->server] = it->placement;
    }
    undo_.clear();
  }

  /// Records chain c as deployed with the given per-position fractions and
  /// product-form transitions.
  void commit(std::size_t c, std::vector<ServerFractions> y) {
    undo_.clear();
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      TransitionFractions z;
      for (const auto& [k, fk] : y[i]) {
        for (const auto& [l, fl] : y[i + 1]) z[{k, l}] = fk * fl;
      }
      p_.transitions[c][i] = std::move(z);
    }
    p_.assignment[c] = std::move(y);
    p_.deployed[c] = 1;
  }

  /// Removes a deployed chain, releasing its load and any instance left with
  /// no users.
  void remove(std::size_t c) {
    const double lambda = instance_.workload().chain(c).lambda;
    for (const auto& y : p_.assignment[c]) {
      for (const auto& [l, f] : y) {
        load_[l] = std::max(0.0, load_[l] - lambda * f);
        if (--users_[l] == 0) {
          load_[l] = 0.0;
          p_.placement[l].clear();
        }
      }
    }
    p_.clear_chain(c);
  }

  void host_idle(NodeIndex l, VnfIndex v) {
    if (p_.placement[l].empty()) p_.placement[l].push_back(v);
  }

 private:
  struct Undo {
    NodeIndex server;
    double load;
    int users;
    std::vector<VnfIndex> placement;
  };

  const Instance& instance_;
  Provisioning p_;
  std::vector<double> load_;
  std::vector<int> users_;
  std::vector<Undo> undo_;
};

std::vector<std::size_t> chain_order(const Workload& w, ChainOrder order) {
  std::vector<std::size_t> out(w.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  if (order == ChainOrder::PriorityThenRate) {
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      const auto& ca = w.chain(a);
      const auto& cb = w.chain(b);
      if (ca.priority != cb.priority) return ca.priority > cb.priority;
      if (ca.lambda != cb.lambda) return ca.lambda > cb.lambda;
      return ca.id < cb.id;
    });
  }
  return out;
}

bool chain_touches(const Instance& instance, const Provisioning& p, std::size_t c, TrafficMode mode,
                   const std::vector<bool>& flagged) {
  const Topology& t = instance.topology();
  const NodeIndex r = t.root();
  if (flagged[r]) return true;
  if (mode == TrafficMode::Paper) return true;  // every node carries every deployed chain's base rate
  std::vector<NodeIndex> hops;
  for (const auto& [l, f] : p.assignment[c].front()) t.append_path(r, l, hops);
  for (const auto& [m, f] : p.assignment[c].back()) t.append_path(m, r, hops);
  for (const auto& z : p.transitions[c]) {
    for (const auto& [kl, f] : z) t.append_path(kl.first, kl.second, hops);
  }
  return std::any_of(hops.begin(), hops.end(), [&](NodeIndex n) { return flagged[n]; });
}

/// Enforces switch capacity and, in paper mode, gives every server that
/// carries base traffic a VNF instance. Offending chains are demoted most
/// recent first; `retry` may re-place a demoted chain once.
template <typename Retry>
void repair(const Instance& instance, PlacementState& state, std::vector<std::size_t>& deployment_order,
            TrafficMode mode, PlacementLog& log, Retry&& retry) {
  const Topology& t = instance.topology();
  std::vector<bool> retried(instance.workload().size(), false);
  for (;;) {
    Provisioning& p = state.provisioning();
    std::vector<double> b(t.size(), 0.0);
    for (std::size_t c = 0; c < p.deployed.size(); ++c) add_chain_traffic(instance, p, c, mode, b);

    if (mode == TrafficMode::Paper) {
      for (NodeIndex l : t.servers()) {
        if (!p.placement[l].empty() || b[l] <= 0.0) continue;
        std::optional<VnfIndex> best;
        double best_rate = 0.0;
        for (VnfIndex v = 0; v < instance.catalog().vnf_types().size(); ++v) {
          auto g = instance.gamma(l, v);
          if (g && *g > best_rate) {
            best_rate = *g;
            best = v;
          }
        }
        if (best) state.host_idle(l, *best);
      }
    }

    std::vector<bool> flagged(t.size(), false);
    std::string first_reason;
    for (NodeIndex n : t.switches()) {
      if (b[n] - t.mu(n) > kFeasibilityTolerance * std::max(1.0, t.mu(n))) {
        flagged[n] = true;
        if (first_reason.empty()) first_reason = "switch capacity at " + t.id(n);
      }
    }
    for (NodeIndex l : t.servers()) {
      double cap = 0.0;
      for (VnfIndex v : p.placement[l]) cap += instance.gamma(l, v).value_or(0.0);
      if (b[l] - cap > kFeasibilityTolerance * std::max(1.0, cap)) {
        flagged[l] = true;
        if (first_reason.empty()) first_reason = "server capacity at " + t.id(l);
      }
    }
    if (first_reason.empty()) return;

    std::optional<std::size_t> victim;
    for (auto it = deployment_order.rbegin(); it != deployment_order.rend(); ++it) {
      if (p.deployed[*it] && chain_touches(instance, p, *it, mode, flagged)) {
        victim = *it;
        break;
      }
    }
    if (!victim) return;  // nothing left to demote; cannot happen with d = 0 everywhere
    const std::size_t c = *victim;
    deployment_order.erase(std::find(deployment_order.begin(), deployment_order.end(), c));
    state.remove(c);
    ++log.demotions;
    ChainOutcome& outcome = log.chains[c];
    outcome.deployed = false;
    outcome.limit.reset();
    outcome.reason = first_reason;
    if (!retried[c]) {
      retried[c] = true;
      if (retry(c)) deployment_order.push_back(c);
    }
  }
}

}  // namespace

PlacementResult round_robin_place(const Instance& instance, const HeuristicConfig& config) {
  const std::vector<double> schedule = config.limit_schedule();
  const Topology& t = instance.topology();
  const Workload& w = instance.workload();
  const std::vector<NodeIndex> tors = t.tors();
  if (tors.empty()) throw InputError("round_robin_place: topology has no top-of-rack switch");

  std::vector<std::vector<NodeIndex>> racks(tors.size());
  for (std::size_t k = 0; k < tors.size(); ++k) {
    for (NodeIndex child : t.children(tors[k])) {
      if (t.is_server(child)) racks[k].push_back(child);
    }
  }

  PlacementState state(instance);
  PlacementResult result;
  result.log.method = "round-robin";
  result.log.chains.resize(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) result.log.chains[c].chain = c;

  // Splits `demand` of type v over servers of one rack, or returns nullopt.
  auto fit_rack = [&](std::size_t rack, VnfIndex v, double demand, double limit) -> std::optional<ServerFractions> {
    struct Candidate {
      NodeIndex server;
      bool hosting;
      double utilization;
      double residual;
    };
    std::vector<Candidate> candidates;
    for (NodeIndex l : racks[rack]) {
      auto r = state.residual(l, v, limit);
      if (!r || *r <= kEps) continue;
      const bool hosting = state.hosted(l).has_value();
      candidates.push_back({l, hosting, state.load(l) / *instance.gamma(l, v), *r});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.hosting != b.hosting) return a.hosting;
      if (a.utilization != b.utilization) return a.utilization < b.utilization;
      return a.server < b.server;
    });
    double total = 0.0;
    std::size_t used = 0;
    while (used < candidates.size() && total < demand - kEps) total += candidates[used++].residual;
    if (total < demand - kEps) return std::nullopt;
    ServerFractions out;
    if (used == 1) {
      out[candidates[0].server] = 1.0;
    } else {
      for (std::size_t k = 0; k < used; ++k) out[candidates[k].server] = candidates[k].residual / total;
    }
    return out;
  };

  auto place = [&](std::size_t c, std::size_t start, double limit) -> bool {
    const ServiceChain& chain = w.chain(c);
    ChainOutcome& outcome = result.log.chains[c];
    outcome.start_tor = tors[start];
    outcome.tors_visited = {tors[start]};
    state.begin();
    std::vector<ServerFractions> y(chain.length());
    std::size_t rack = start;
    for (std::size_t i = 0; i < chain.length(); ++i) {
      const VnfIndex v = chain.vnfs[i];
      std::optional<ServerFractions> fit;
      for (std::size_t tried = 0; tried < tors.size(); ++tried) {
        fit = fit_rack(rack, v, chain.lambda, limit);
        if (fit) break;
        rack = (rack + 1) % tors.size();
        outcome.tors_visited.push_back(tors[rack]);
      }
      if (!fit) {
        state.rollback();
        outcome.reason = "no server capacity for \"" + instance.catalog().vnf_types()[v] + "\" at limit " +
                         std::to_string(limit);
        return false;
      }
      for (const auto& [l, f] : *fit) state.assign(l, v, chain.lambda * f);
      y[i] = std::move(*fit);
    }
    state.commit(c, std::move(y));
    outcome.deployed = true;
    outcome.limit = limit;
    outcome.reason.clear();
    return true;
  };

  std::vector<std::size_t> pending = chain_order(w, config.chain_order);
  std::vector<std::size_t> deployment_order;
  std::size_t cursor = 0;
  for (double limit : schedule) {
    if (pending.empty()) break;
    result.log.limits.push_back(limit);
    std::vector<std::size_t> still;
    for (std::size_t c : pending) {
      const std::size_t start = cursor;
      cursor = (cursor + 1) % tors.size();
      if (place(c, start, limit)) {
        deployment_order.push_back(c);
      } else {
        still.push_back(c);
      }
    }
    pending = std::move(still);
  }

  repair(instance, state, deployment_order, config.mode, result.log, [&](std::size_t c) {
    const NodeIndex previous = result.log.chains[c].start_tor.value_or(tors.front());
    const auto at = static_cast<std::size_t>(std::find(tors.begin(), tors.end(), previous) - tors.begin());
    const std::string reason = result.log.chains[c].reason;
    if (place(c, (at + 1) % tors.size(), config.limit_max)) return true;
    result.log.chains[c].reason = reason;
    return false;
  });

  result.provisioning = state.provisioning();
  return result;
}

PlacementResult random_place(const Instance& instance, std::uint64_t seed, const HeuristicConfig& config) {
  config.validate();
  const Topology& t = instance.topology();
  const Workload& w = instance.workload();
  const auto servers = t.servers();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, servers.size() - 1);

  PlacementState state(instance);
  PlacementResult result;
  result.log.method = "random";
  result.log.chains.resize(w.size());
  std::vector<std::size_t> deployment_order;

  for (std::size_t c = 0; c < w.size(); ++c) {
    const ServiceChain& chain = w.chain(c);
    ChainOutcome& outcome = result.log.chains[c];
    outcome.chain = c;
    state.begin();
    std::vector<ServerFractions> y(chain.length());
    bool ok = true;
    for (std::size_t i = 0; i < chain.length() && ok; ++i) {
      const VnfIndex v = chain.vnfs[i];
      int rejections = 0;
      for (;;) {
        const NodeIndex l = servers[pick(rng)];
        auto r = state.residual(l, v, 1.0);
        if (r && *r >= chain.lambda - kEps) {
          state.assign(l, v, chain.lambda);
          y[i] = {{l, 1.0}};
          break;
        }
        if (++rejections >= config.max_rejections) {
          ok = false;
          outcome.reason = "no server accepted \"" + instance.catalog().vnf_types()[v] + "\" after " +
                           std::to_string(rejections) + " draws";
          break;
        }
      }
    }
    if (!ok) {
      state.rollback();
      continue;
    }
    state.commit(c, std::move(y));
    outcome.deployed = true;
    outcome.limit = 1.0;
    deployment_order.push_back(c);
  }

  repair(instance, state, deployment_order, config.mode, result.log, [](std::size_t) { return false; });
  result.provisioning = state.provisioning();
  return result;
}

std::string placement_log_json(const PlacementLog& log, const Instance& instance) {
  using detail::json;
  const Topology& t = instance.topology();
  json chains = json::array();
  for (const ChainOutcome& o : log.chains) {
    json e;
    e["chain"] = instance.workload().chain(o.chain).id;
    e["deployed"] = o.deployed;
    if (o.start_tor) e["start_tor"] = t.id(*o.start_tor);
    json visited = json::array();
    for (NodeIndex n : o.tors_visited) visited.push_back(t.id(n));
    e["tors_visited"] = std::move(visited);
    if (o.limit) e["limit"] = *o.limit;
    if (!o.reason.empty()) e["reason"] = o.reason;
    chains.push_back(std::move(e));
  }
  json doc;
  doc["method"] = log.method;
  doc["limits"] = log.limits;
  doc["demotions"] = log.demotions;
  doc["chains"] = std::move(chains);
  return detail::dump(doc);
}

}  // namespace sfc
