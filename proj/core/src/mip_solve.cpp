#include <algorithm>
#include <cmath>
#include <set>

#include "sfc/mip.hpp"

namespace sfc {

namespace {

constexpr double kRhoTolerance = 1e-5;
constexpr double kZero = 1e-9;

double weight_on(const MipModel& model, std::string_view name) {
  for (const Term& t : model.objective) {
    if (model.variables[t.var].name == name) return t.coef;
  }
  return 0.0;
}

std::vector<int> violated_ids(const FeasibilityReport& report) {
  std::set<int> ids;
  for (const Violation& v : report.violations) ids.insert(v.constraint);
  return {ids.begin(), ids.end()};
}

std::string describe(const FeasibilityReport& report) {
  std::string out;
  for (const Violation& v : report.violations) {
    if (!out.empty()) out += "; ";
    out += "(" + std::to_string(v.constraint) + ")";
    if (!v.chain.empty()) out += " chain " + v.chain;
    if (v.position > 0) out += " position " + std::to_string(v.position);
    if (!v.node.empty()) out += " node " + v.node;
    out += ": " + v.detail;
    if (out.size() > 600) {
      out += "; ...";
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
  }
  return "unknown";
}

Provisioning ingest_solution(const MipModel& model, const Instance& instance, const ModelOptions& options,
                             const VariableValues& values) {
  if (model.roles.size() != model.variables.size()) {
    throw InputError("ingest: the model was not built for this instance");
  }
  std::vector<std::string> missing;
  for (const Variable& v : model.variables) {
    if (!values.contains(v.name)) missing.push_back(v.name);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ...";
    throw InputError("ingest: " + std::to_string(missing.size()) + " variable(s) missing from solver output: " + list);
  }

  const Topology& t = instance.topology();
  Provisioning p = Provisioning::empty(instance, !options.priority_extension);
  ReportedTraffic reported;
  reported.b.assign(t.size(), 0.0);
  using Kind = VariableRole::Kind;
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    const VariableRole& r = model.roles[k];
    const double v = values.at(model.variables[k].name);
    switch (r.kind) {
      case Kind::Placement:
        if (v > 0.5) p.placement[r.node].push_back(r.vnf);
        break;
      case Kind::Assignment:
        if (std::abs(v) > kZero) p.assignment[r.chain][r.position][r.node] = v;
        break;
      case Kind::Transition:
        if (std::abs(v) > kZero) p.transitions[r.chain][r.position][{r.node, r.to}] = v;
        break;
      case Kind::Traffic:
        reported.b[r.node] = v;
        break;
      case Kind::MaxUtilization:
        reported.rho = v;
        break;
      case Kind::Deployment:
        p.deployed[r.chain] = v > 0.5 ? 1 : 0;
        break;
    }
  }

  const FeasibilityReport report = check_feasibility(instance, p, options.mode, &reported);
  if (!report.feasible()) {
    throw FeasibilityMismatch("ingest: solver values are infeasible: " + describe(report), violated_ids(report));
  }
  // With rho in the objective the optimum sits at the true maximum; check it.
  if (reported.rho && weight_on(model, "rho") != 0.0) {
    const TrafficProfile traffic = compute_traffic(instance, p, options.mode);
    if (std::abs(*reported.rho - traffic.rho_max) > kRhoTolerance) {
      const int id = t.is_server(traffic.rho_argmax) ? 21 : 20;
      throw FeasibilityMismatch("ingest: solver rho " + std::to_string(*reported.rho) +
                                    " differs from the recomputed maximum utilization " +
                                    std::to_string(traffic.rho_max),
                                {id});
    }
  }
  return p;
}

VariableValues warm_start(const MipModel& model, const Instance& instance, const ModelOptions& options,
                          const Provisioning& p) {
  if (model.roles.size() != model.variables.size()) {
    throw InputError("warm start: the model was not built for this instance");
  }
  if (!options.priority_extension && p.deployed_count() != p.deployed.size()) {
    throw InputError("warm start: every chain must be deployed unless the priority extension is enabled");
  }
  const FeasibilityReport report = check_feasibility(instance, p, options.mode);
  if (!report.feasible()) throw InputError("warm start: provisioning is infeasible: " + describe(report));
  const TrafficProfile traffic = compute_traffic(instance, p, options.mode);

  VariableValues out;
  using Kind = VariableRole::Kind;
  for (std::size_t k = 0; k < model.variables.size(); ++k) {
    const VariableRole& r = model.roles[k];
    double v = 0.0;
    switch (r.kind) {
      case Kind::Placement: {
        const auto& hosted = p.placement[r.node];
        v = std::find(hosted.begin(), hosted.end(), r.vnf) != hosted.end() ? 1.0 : 0.0;
        break;
      }
      case Kind::Assignment: {
        const auto& y = p.assignment[r.chain][r.position];
        auto it = y.find(r.node);
        v = it == y.end() ? 0.0 : it->second;
        break;
      }
      case Kind::Transition: {
        const auto& z = p.transitions[r.chain][r.position];
        auto it = z.find({r.node, r.to});
        v = it == z.end() ? 0.0 : it->second;
        break;
      }
      case Kind::Traffic:
        v = traffic.b[r.node];
        break;
      case Kind::MaxUtilization:
        v = traffic.rho_max;
        break;
      case Kind::Deployment:
        v = p.deployed[r.chain] ? 1.0 : 0.0;
        break;
    }
    out[model.variables[k].name] = v;
  }
  return out;
}

double evaluate_objective(const MipModel& model, const VariableValues& values) {
  double sum = 0.0;
  for (const Term& t : model.objective) {
    auto it = values.find(model.variables[t.var].name);
    if (it != values.end()) sum += t.coef * it->second;
  }
  return sum;
}

Provisioning two_phase_solve(const Instance& instance, double beta, TrafficMode mode, const MipBackend& backend) {
  ModelOptions options{beta, true, mode, std::nullopt};

  // Phase 1: maximize the number of deployed chains.
  MipModel first = build_model(instance, options);
  first.maximize = true;
  first.objective.clear();
  for (std::size_t k = 0; k < first.variables.size(); ++k) {
    if (first.roles[k].kind == VariableRole::Kind::Deployment) first.objective.push_back({k, 1.0});
  }
  const SolverResult r1 = backend(first);
  if (r1.status == SolveStatus::Infeasible || r1.values.empty()) {
    throw InputError("two-phase solve: phase 1 returned " + std::string(to_string(r1.status)));
  }

  // Phase 2: the weighted objective with the deployment flags fixed.
  MipModel second = build_model(instance, options);
  for (std::size_t k = 0; k < second.variables.size(); ++k) {
    if (second.roles[k].kind != VariableRole::Kind::Deployment) continue;
    auto it = r1.values.find(second.variables[k].name);
    if (it == r1.values.end()) throw InputError("two-phase solve: phase 1 omitted " + second.variables[k].name);
    const double d = it->second > 0.5 ? 1.0 : 0.0;
    second.variables[k].lower = d;
    second.variables[k].upper = d;
  }
  const SolverResult r2 = backend(second);
  if (r2.status == SolveStatus::Infeasible || r2.values.empty()) {
    throw InputError("two-phase solve: phase 2 returned " + std::string(to_string(r2.status)));
  }
  return ingest_solution(second, instance, options, r2.values);
}

}  // namespace sfc
