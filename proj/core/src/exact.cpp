#include "sfc/exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

namespace sfc {

namespace {

using Clock = std::chrono::steady_clock;
constexpr VnfIndex kNone = std::numeric_limits<VnfIndex>::max();

bool exceeds(double value, double limit) {
  return value - limit > kFeasibilityTolerance * std::max(1.0, std::abs(limit));
}

struct Search {
  const Instance& inst;
  const Topology& t;
  double beta;
  const ExactOptions& opt;
  std::vector<std::uint8_t> deploy;
  std::vector<NodeIndex> servers;
  std::vector<std::pair<std::size_t, VnfIndex>> positions;  // (chain, vnf)
  std::vector<std::vector<NodeIndex>> to_server, from_server;
  std::vector<std::vector<std::vector<NodeIndex>>> between;

  std::vector<std::size_t> choice;  // server slot per position
  std::vector<VnfIndex> host;       // per server slot
  std::vector<int> host_count;
  std::vector<double> b;

  Clock::time_point deadline;
  bool timed_out = false;
  std::uint64_t leaves = 0;
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_choice;
  std::vector<VnfIndex> best_host;

  Search(const Instance& instance, double beta_, const ExactOptions& options, std::vector<std::uint8_t> mask)
      : inst(instance), t(instance.topology()), beta(beta_), opt(options), deploy(std::move(mask)) {
    servers.assign(t.servers().begin(), t.servers().end());
    const auto& chains = inst.workload().chains();
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (!deploy[c]) continue;
      for (VnfIndex v : chains[c].vnfs) positions.push_back({c, v});
    }
    const std::size_t L = servers.size();
    to_server.resize(L);
    from_server.resize(L);
    between.assign(L, std::vector<std::vector<NodeIndex>>(L));
    for (std::size_t a = 0; a < L; ++a) {
      to_server[a] = t.path(t.root(), servers[a]);
      from_server[a] = t.path(servers[a], t.root());
      for (std::size_t c = 0; c < L; ++c) between[a][c] = t.path(servers[a], servers[c]);
    }
    choice.assign(positions.size(), 0);
    host.assign(L, kNone);
    host_count.assign(L, 0);
    b.assign(t.size(), 0.0);
  }

  // Same summation order as add_chain_traffic, so the objective is bitwise
  // identical to the one computed from the resulting provisioning.
  void evaluate() {
    ++leaves;
    std::fill(b.begin(), b.end(), 0.0);
    const auto& chains = inst.workload().chains();
    const NodeIndex r = t.root();
    std::size_t pos = 0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (!deploy[c]) continue;
      const double lambda = chains[c].lambda;
      const std::size_t q = chains[c].length();
      b[r] += lambda;
      if (opt.mode == TrafficMode::Paper) {
        for (std::size_t k = 0; k < b.size(); ++k) {
          if (k != r) b[k] += lambda;
        }
      }
      for (NodeIndex n : to_server[choice[pos]]) b[n] += lambda;
      for (NodeIndex n : from_server[choice[pos + q - 1]]) b[n] += lambda;
      for (std::size_t i = 0; i + 1 < q; ++i) {
        for (NodeIndex n : between[choice[pos + i]][choice[pos + i + 1]]) b[n] += lambda;
      }
      pos += q;
    }

    std::vector<VnfIndex> hosted = host;
    double rho = 0.0;
    for (NodeIndex n : t.switches()) {
      if (exceeds(b[n], t.mu(n))) return;
      rho = std::max(rho, b[n] / t.mu(n));
    }
    std::size_t used = 0;
    const std::size_t nv = inst.catalog().vnf_types().size();
    for (std::size_t s = 0; s < servers.size(); ++s) {
      const NodeIndex l = servers[s];
      if (hosted[s] == kNone) {
        if (!(b[l] > kFeasibilityTolerance)) continue;
        // Only reachable in paper mode: an idle server still carries traffic.
        double g_best = 0.0;
        for (VnfIndex v = 0; v < nv; ++v) {
          if (auto g = inst.gamma(l, v); g && *g > g_best) {
            g_best = *g;
            hosted[s] = v;
          }
        }
        if (hosted[s] == kNone) return;
      }
      ++used;
      const double g = *inst.gamma(l, hosted[s]);
      if (exceeds(b[l], g)) return;
      rho = std::max(rho, b[l] / g);
    }
    if (opt.max_servers && used > *opt.max_servers) return;
    const double value =
        (1.0 - beta) * rho + beta * (static_cast<double>(used) / static_cast<double>(servers.size()));
    if (!found || value < best) {
      found = true;
      best = value;
      best_choice = choice;
      best_host = hosted;
    }
  }

  void run(std::size_t p) {
    if (timed_out) return;
    if (p == positions.size()) {
      evaluate();
      if ((leaves & 255) == 0 && Clock::now() > deadline) timed_out = true;
      return;
    }
    const VnfIndex v = positions[p].second;
    for (std::size_t s = 0; s < servers.size(); ++s) {
      if (host[s] != kNone && host[s] != v) continue;
      if (!inst.gamma(servers[s], v)) continue;
      choice[p] = s;
      if (host_count[s]++ == 0) host[s] = v;
      run(p + 1);
      if (--host_count[s] == 0) host[s] = kNone;
      if (timed_out) return;
    }
  }

  Provisioning provisioning() const {
    Provisioning p = Provisioning::empty(inst, false);
    if (!found) return p;
    for (std::size_t s = 0; s < servers.size(); ++s) {
      if (best_host[s] != kNone) p.placement[servers[s]].push_back(best_host[s]);
    }
    const auto& chains = inst.workload().chains();
    std::size_t pos = 0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (!deploy[c]) continue;
      std::vector<NodeIndex> route;
      for (std::size_t i = 0; i < chains[c].length(); ++i) route.push_back(servers[best_choice[pos + i]]);
      p.route_unsplit(c, route);
      pos += chains[c].length();
    }
    return p;
  }
};

void check_size(const Instance& instance) {
  const std::size_t L = instance.topology().servers().size();
  const std::size_t positions = instance.workload().total_positions();
  if (L > kExactMaxServers || positions > kExactMaxPositions) {
    throw UnsupportedError("exact solver: instance too large (" + std::to_string(L) + " servers, " +
                           std::to_string(positions) + " chain positions; limits are " +
                           std::to_string(kExactMaxServers) + " and " + std::to_string(kExactMaxPositions) + ")");
  }
}

struct Outcome {
  bool found = false;
  bool timed_out = false;
  double objective = 0.0;
  Provisioning provisioning;
  std::uint64_t leaves = 0;
};

Outcome search(const Instance& instance, double beta, const ExactOptions& options, std::vector<std::uint8_t> mask,
               Clock::time_point deadline) {
  Search s(instance, beta, options, std::move(mask));
  s.deadline = deadline;
  s.run(0);
  Outcome out;
  out.found = s.found;
  out.timed_out = s.timed_out;
  out.objective = s.best;
  out.provisioning = s.provisioning();
  out.leaves = s.leaves;
  return out;
}

// Deployment sets that respect the priority order, largest first; among sets
// of equal size, those keeping earlier chains come first.
std::vector<std::vector<std::uint8_t>> priority_subsets(const Instance& instance) {
  const auto& chains = instance.workload().chains();
  const std::size_t n = chains.size();
  if (n > 16) throw UnsupportedError("exact solver: too many chains for subset enumeration");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      for (std::size_t c = 0; c < n && ok; ++c) {
        if (chains[a].priority > chains[c].priority && (m >> c & 1u) && !(m >> a & 1u)) ok = false;
      }
    }
    if (ok) masks.push_back(m);
  }
  // Bit c of the key is chain c counted from the most significant end.
  auto key = [n](std::uint32_t m) {
    std::uint32_t k = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (m >> c & 1u) k |= 1u << (n - 1 - c);
    }
    return k;
  };
  std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa > pb;
    return key(a) > key(b);
  });
  std::vector<std::vector<std::uint8_t>> out;
  for (std::uint32_t m : masks) {
    std::vector<std::uint8_t> mask(n);
    for (std::size_t c = 0; c < n; ++c) mask[c] = (m >> c & 1u) ? 1 : 0;
    out.push_back(std::move(mask));
  }
  return out;
}

ExactResult finish(const Instance& instance, double beta, const ExactOptions& options, bool extension,
                   const Outcome& o, Clock::time_point start) {
  ExactResult r;
  r.candidates = o.leaves;
  r.provisioning = o.provisioning;
  if (o.found) {
    r.solver.status = o.timed_out ? SolveStatus::Feasible : SolveStatus::Optimal;
    r.solver.objective = o.objective;
    ModelOptions mo{beta, extension, options.mode, options.max_servers};
    const MipModel model = build_model(instance, mo);
    r.solver.values = warm_start(model, instance, mo, r.provisioning);
  } else {
    r.solver.status = o.timed_out ? SolveStatus::Timeout : SolveStatus::Infeasible;
  }
  r.solver.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

Clock::time_point deadline_for(double seconds, Clock::time_point start) {
  const double capped = std::min(std::max(seconds, 0.0), 1e7);
  return start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(capped));
}

}  // namespace

ExactResult exact_solve(const Instance& instance, double beta, const ExactOptions& options) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("exact solver: beta must lie in [0, 1]");
  check_size(instance);
  const auto start = Clock::now();
  std::vector<std::uint8_t> mask = options.deploy;
  const bool extension = !mask.empty();
  if (mask.empty()) mask.assign(instance.workload().size(), 1);
  if (mask.size() != instance.workload().size()) throw InputError("exact solver: deploy mask has the wrong length");
  const Outcome o = search(instance, beta, options, mask, deadline_for(options.time_limit, start));
  return finish(instance, beta, options, extension, o, start);
}

ExactResult exact_two_phase(const Instance& instance, double beta, const ExactOptions& options) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("exact solver: beta must lie in [0, 1]");
  check_size(instance);
  const auto start = Clock::now();
  const auto deadline = deadline_for(options.time_limit, start);
  std::uint64_t leaves = 0;
  for (const auto& mask : priority_subsets(instance)) {
    Outcome o = search(instance, beta, options, mask, deadline);
    leaves += o.leaves;
    if (o.found || o.timed_out) {
      o.leaves = leaves;
      return finish(instance, beta, options, true, o, start);
    }
  }
  Outcome none;
  none.leaves = leaves;
  return finish(instance, beta, options, true, none, start);
}

MipBackend exact_backend(const Instance& instance, TrafficMode mode, double time_limit) {
  return [&instance, mode, time_limit](const MipModel& model) {
    if (model.roles.size() != model.variables.size()) {
      throw InputError("exact backend: the model was not built by this tool");
    }
    const auto start = Clock::now();
    ExactOptions options;
    options.mode = mode;
    options.time_limit = time_limit;
    for (const Constraint& c : model.constraints) {
      if (c.family == kBudgetFamily) options.max_servers = static_cast<std::size_t>(std::floor(c.rhs + 1e-9));
    }
    double beta = 1.0;
    for (const Term& term : model.objective) {
      if (model.roles[term.var].kind == VariableRole::Kind::MaxUtilization) beta = 1.0 - term.coef;
    }
    const bool has_rho_or_x = std::any_of(model.objective.begin(), model.objective.end(), [&](const Term& term) {
      const auto kind = model.roles[term.var].kind;
      return kind == VariableRole::Kind::MaxUtilization || kind == VariableRole::Kind::Placement;
    });
    if (!has_rho_or_x) beta = 0.0;

    std::vector<std::size_t> d_vars;
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
      if (model.roles[k].kind == VariableRole::Kind::Deployment) d_vars.push_back(k);
    }
    const bool extension = !d_vars.empty();
    ModelOptions mo{beta, extension, mode, options.max_servers};

    ExactResult r;
    if (!extension) {
      r = exact_solve(instance, beta, options);
    } else if (model.maximize) {
      r = exact_two_phase(instance, beta, options);
    } else {
      // Deployment flags either fixed by bounds or free; free flags are
      // enumerated over the priority-consistent sets.
      std::vector<std::vector<std::uint8_t>> candidates;
      for (const auto& mask : priority_subsets(instance)) {
        bool ok = true;
        for (std::size_t k : d_vars) {
          const Variable& v = model.variables[k];
          const std::uint8_t d = mask[model.roles[k].chain];
          if (d < v.lower - 1e-9 || d > v.upper + 1e-9) ok = false;
        }
        if (ok) candidates.push_back(mask);
      }
      bool have = false;
      for (const auto& mask : candidates) {
        options.deploy = mask;
        ExactResult e = exact_solve(instance, beta, options);
        const bool usable = e.solver.status == SolveStatus::Optimal || e.solver.status == SolveStatus::Feasible;
        if (usable && (!have || e.solver.objective < r.solver.objective)) {
          r = std::move(e);
          have = true;
        }
      }
      if (!have) r.solver.status = SolveStatus::Infeasible;
    }
    SolverResult out;
    out.status = r.solver.status;
    if (out.status == SolveStatus::Optimal || out.status == SolveStatus::Feasible) {
      out.values = warm_start(model, instance, mo, r.provisioning);
      out.objective = evaluate_objective(model, out.values);
    }
    out.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  };
}

}  // namespace sfc
