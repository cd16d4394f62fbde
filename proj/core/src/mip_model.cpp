#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "sfc/mip.hpp"

namespace sfc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ModelBuilder {
 public:
  explicit ModelBuilder(MipModel& model) : model_(model) {}

  std::size_t add_variable(std::string name, double lower, double upper, bool integer, VariableRole role) {
    if (!names_.insert(name).second) {
      throw InputError("model: variable name collision after sanitization: \"" + name + "\"");
    }
    model_.variables.push_back({std::move(name), lower, upper, integer});
    model_.roles.push_back(role);
    return model_.variables.size() - 1;
  }

  void add_row(int family, std::vector<Term> terms, Sense sense, double rhs) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const Term& t : terms) {
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    if (merged.empty()) return;
    std::string name = family == kBudgetFamily ? "budget" : "c" + std::to_string(family) + "_" + std::to_string(counter_[family]++);
    model_.constraints.push_back({std::move(name), family, std::move(merged), sense, rhs});
  }

 private:
  MipModel& model_;
  std::unordered_set<std::string> names_;
  std::map<int, std::size_t> counter_;
};

std::string position_name(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

std::string sanitize_name(std::string_view id) {
  std::string out(id);
  for (char& ch : out) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
    if (!ok) ch = '_';
  }
  return out;
}

std::optional<std::size_t> MipModel::find(std::string_view variable) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == variable) return i;
  }
  return std::nullopt;
}

double big_m(const VnfCatalog& catalog) {
  double m = 1.0 + std::max(1.0, catalog.max_gamma());
  // A server's rate is bounded by the rate of the VNF it hosts, so the row of
  // any other VNF type must stay slack for that ratio as well.
  for (ServerTypeIndex s = 0; s < catalog.server_types().size(); ++s) {
    double lo = kInf;
    double hi = 0.0;
    for (VnfIndex v = 0; v < catalog.vnf_types().size(); ++v) {
      if (auto g = catalog.gamma(s, v)) {
        lo = std::min(lo, *g);
        hi = std::max(hi, *g);
      }
    }
    if (hi > 0.0) m = std::max(m, 1.0 + hi / lo);
  }
  return m;
}

MipModel build_model(const Instance& instance, const ModelOptions& options) {
  if (!(options.beta >= 0.0 && options.beta <= 1.0)) throw InputError("model: beta must lie in [0, 1]");
  const Topology& t = instance.topology();
  const VnfCatalog& catalog = instance.catalog();
  const auto& chains = instance.workload().chains();
  const auto servers = t.servers();
  const std::size_t nv = catalog.vnf_types().size();
  const NodeIndex root = t.root();
  using Kind = VariableRole::Kind;

  MipModel model;
  ModelBuilder mb(model);

  // x[v][server position]
  std::vector<std::vector<std::size_t>> x(nv, std::vector<std::size_t>(servers.size()));
  for (VnfIndex v = 0; v < nv; ++v) {
    for (std::size_t s = 0; s < servers.size(); ++s) {
      const NodeIndex l = servers[s];
      const double upper = instance.gamma(l, v) ? 1.0 : 0.0;
      x[v][s] = mb.add_variable("x_" + sanitize_name(catalog.vnf_types()[v]) + "_" + sanitize_name(t.id(l)), 0.0,
                                upper, true, {Kind::Placement, 0, 0, l, 0, v});
    }
  }
  // y[c][i][server position]
  std::vector<std::vector<std::vector<std::size_t>>> y(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    y[c].resize(chains[c].length());
    for (std::size_t i = 0; i < chains[c].length(); ++i) {
      for (std::size_t s = 0; s < servers.size(); ++s) {
        y[c][i].push_back(mb.add_variable(
            "y_" + sanitize_name(chains[c].id) + "_" + position_name(i) + "_" + sanitize_name(t.id(servers[s])), 0.0,
            1.0, false, {Kind::Assignment, c, i, servers[s], 0, 0}));
      }
    }
  }
  // z[c][i][k * |L| + l]
  std::vector<std::vector<std::vector<std::size_t>>> z(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    z[c].resize(chains[c].length() - 1);
    for (std::size_t i = 0; i + 1 < chains[c].length(); ++i) {
      for (std::size_t k = 0; k < servers.size(); ++k) {
        for (std::size_t l = 0; l < servers.size(); ++l) {
          z[c][i].push_back(mb.add_variable("z_" + sanitize_name(chains[c].id) + "_" + position_name(i) + "_" +
                                                sanitize_name(t.id(servers[k])) + "_" + sanitize_name(t.id(servers[l])),
                                            0.0, 1.0, false, {Kind::Transition, c, i, servers[k], servers[l], 0}));
        }
      }
    }
  }
  std::vector<std::size_t> b(t.size());
  for (std::size_t n = 0; n < t.size(); ++n) {
    const auto node = static_cast<NodeIndex>(n);
    b[n] = mb.add_variable("b_" + sanitize_name(t.id(node)), 0.0, kInf, false, {Kind::Traffic, 0, 0, node, 0, 0});
  }
  const std::size_t rho = mb.add_variable("rho", 0.0, kInf, false, {Kind::MaxUtilization, 0, 0, 0, 0, 0});
  std::vector<std::size_t> d;
  if (options.priority_extension) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      d.push_back(mb.add_variable("d_" + sanitize_name(chains[c].id), 0.0, 1.0, true, {Kind::Deployment, c, 0, 0, 0, 0}));
    }
  }

  // (9) at most one VNF type per server.
  for (std::size_t s = 0; s < servers.size(); ++s) {
    std::vector<Term> row;
    for (VnfIndex v = 0; v < nv; ++v) row.push_back({x[v][s], 1.0});
    mb.add_row(9, std::move(row), Sense::LessEqual, 1.0);
  }
  // (10) assignment only where the right type is placed.
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < chains[c].length(); ++i) {
      for (std::size_t s = 0; s < servers.size(); ++s) {
        mb.add_row(10, {{y[c][i][s], 1.0}, {x[chains[c].vnfs[i]][s], -1.0}}, Sense::LessEqual, 0.0);
      }
    }
  }
  // (11) every position fully served (or d_c of it).
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < chains[c].length(); ++i) {
      std::vector<Term> row;
      for (std::size_t v : y[c][i]) row.push_back({v, 1.0});
      if (options.priority_extension) {
        row.push_back({d[c], -1.0});
        mb.add_row(11, std::move(row), Sense::Equal, 0.0);
      } else {
        mb.add_row(11, std::move(row), Sense::Equal, 1.0);
      }
    }
  }
  // (12)-(13) transitions bounded by both endpoint assignments.
  for (int family : {12, 13}) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (std::size_t i = 0; i + 1 < chains[c].length(); ++i) {
        for (std::size_t k = 0; k < servers.size(); ++k) {
          for (std::size_t l = 0; l < servers.size(); ++l) {
            const std::size_t bound = family == 12 ? y[c][i][k] : y[c][i + 1][l];
            mb.add_row(family, {{z[c][i][k * servers.size() + l], 1.0}, {bound, -1.0}}, Sense::LessEqual, 0.0);
          }
        }
      }
    }
  }
  // (14) every hop fully routed.
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i + 1 < chains[c].length(); ++i) {
      std::vector<Term> row;
      for (std::size_t v : z[c][i]) row.push_back({v, 1.0});
      if (options.priority_extension) {
        row.push_back({d[c], -1.0});
        mb.add_row(14, std::move(row), Sense::Equal, 0.0);
      } else {
        mb.add_row(14, std::move(row), Sense::Equal, 1.0);
      }
    }
  }
  // (15) flow conservation at servers.
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const std::size_t q = chains[c].length();
    for (std::size_t k = 0; k < servers.size(); ++k) {
      std::vector<Term> row{{y[c][0][k], 1.0}, {y[c][q - 1][k], -1.0}};
      for (std::size_t i = 0; i + 1 < q; ++i) {
        for (std::size_t m = 0; m < servers.size(); ++m) {
          row.push_back({z[c][i][m * servers.size() + k], 1.0});
          row.push_back({z[c][i][k * servers.size() + m], -1.0});
        }
      }
      mb.add_row(15, std::move(row), Sense::Equal, 0.0);
    }
  }
  // (16)-(17) traffic into every node.
  std::vector<std::vector<Term>> traffic(t.size());
  std::vector<double> constant(t.size(), 0.0);
  std::vector<NodeIndex> hops;
  auto along = [&](NodeIndex from, NodeIndex to, std::size_t var, double lambda) {
    hops.clear();
    t.append_path(from, to, hops);
    for (NodeIndex n : hops) traffic[n].push_back({var, -lambda});
  };
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const double lambda = chains[c].lambda;
    const std::size_t q = chains[c].length();
    for (std::size_t s = 0; s < servers.size(); ++s) {
      along(root, servers[s], y[c][0][s], lambda);
      along(servers[s], root, y[c][q - 1][s], lambda);
    }
    for (std::size_t i = 0; i + 1 < q; ++i) {
      for (std::size_t k = 0; k < servers.size(); ++k) {
        for (std::size_t l = 0; l < servers.size(); ++l) {
          along(servers[k], servers[l], z[c][i][k * servers.size() + l], lambda);
        }
      }
    }
    for (std::size_t n = 0; n < t.size(); ++n) {
      const bool base = n == root || options.mode == TrafficMode::Paper;
      if (!base) continue;
      if (options.priority_extension) {
        traffic[n].push_back({d[c], -lambda});
      } else {
        constant[n] += lambda;
      }
    }
  }
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (n == root) continue;
    traffic[n].push_back({b[n], 1.0});
    mb.add_row(16, std::move(traffic[n]), Sense::Equal, constant[n]);
  }
  traffic[root].push_back({b[root], 1.0});
  mb.add_row(17, std::move(traffic[root]), Sense::Equal, constant[root]);

  // (18) switch capacity.
  for (NodeIndex n : t.switches()) mb.add_row(18, {{b[n], 1.0}}, Sense::LessEqual, t.mu(n));
  // (19) server capacity from the hosted VNF.
  for (std::size_t s = 0; s < servers.size(); ++s) {
    std::vector<Term> row{{b[servers[s]], 1.0}};
    for (VnfIndex v = 0; v < nv; ++v) {
      if (auto g = instance.gamma(servers[s], v)) row.push_back({x[v][s], -*g});
    }
    mb.add_row(19, std::move(row), Sense::LessEqual, 0.0);
  }
  // (20) rho bounds switch utilization.
  for (NodeIndex n : t.switches()) mb.add_row(20, {{rho, 1.0}, {b[n], -1.0 / t.mu(n)}}, Sense::GreaterEqual, 0.0);
  // (21) rho bounds server utilization of the hosted type; big-M relaxes the rest.
  const double m = big_m(catalog);
  for (std::size_t s = 0; s < servers.size(); ++s) {
    for (VnfIndex v = 0; v < nv; ++v) {
      auto g = instance.gamma(servers[s], v);
      if (!g) continue;
      mb.add_row(21, {{rho, 1.0}, {b[servers[s]], -1.0 / *g}, {x[v][s], -m}}, Sense::GreaterEqual, -m);
    }
  }
  // (23) higher priority chains deploy first.
  if (options.priority_extension) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      for (std::size_t c2 = 0; c2 < chains.size(); ++c2) {
        if (chains[c].priority > chains[c2].priority) {
          mb.add_row(23, {{d[c], 1.0}, {d[c2], -1.0}}, Sense::GreaterEqual, 0.0);
        }
      }
    }
  }
  if (options.max_servers) {
    std::vector<Term> row;
    for (const auto& per_type : x) {
      for (std::size_t v : per_type) row.push_back({v, 1.0});
    }
    mb.add_row(kBudgetFamily, std::move(row), Sense::LessEqual, static_cast<double>(*options.max_servers));
  }

  // Objective: (1 - beta) rho + beta / |L| * sum x.
  if (1.0 - options.beta != 0.0) model.objective.push_back({rho, 1.0 - options.beta});
  if (options.beta != 0.0) {
    const double w = options.beta / static_cast<double>(servers.size());
    for (const auto& per_type : x) {
      for (std::size_t v : per_type) model.objective.push_back({v, w});
    }
  }
  std::sort(model.objective.begin(), model.objective.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  return model;
}

std::size_t ModelCounts::constraints() const {
  std::size_t n = 0;
  for (const auto& [family, count] : rows) n += count;
  return n;
}

ModelCounts expected_counts(const Instance& instance, const ModelOptions& options) {
  const Topology& t = instance.topology();
  const auto& chains = instance.workload().chains();
  const std::size_t L = t.servers().size();
  const std::size_t N = t.size();
  const std::size_t V = instance.catalog().vnf_types().size();
  const std::size_t switches = N - L;
  std::size_t positions = 0;
  std::size_t hops = 0;
  std::size_t multi = 0;
  for (const auto& c : chains) {
    positions += c.length();
    hops += c.length() - 1;
    multi += c.length() >= 2 ? 1 : 0;
  }
  std::size_t admissible = 0;
  for (NodeIndex l : t.servers()) {
    for (VnfIndex v = 0; v < V; ++v) admissible += instance.gamma(l, v) ? 1 : 0;
  }
  std::size_t strictly_ordered = 0;
  for (const auto& a : chains) {
    for (const auto& b : chains) strictly_ordered += a.priority > b.priority ? 1 : 0;
  }

  ModelCounts out;
  out.x = V * L;
  out.y = positions * L;
  out.z = hops * L * L;
  out.b = N;
  out.d = options.priority_extension ? chains.size() : 0;
  out.rows[9] = V > 0 ? L : 0;
  out.rows[10] = positions * L;
  out.rows[11] = positions;
  out.rows[12] = hops * L * L;
  out.rows[13] = hops * L * L;
  out.rows[14] = hops;
  out.rows[15] = multi * L;  // single-VNF chains cancel to empty rows
  out.rows[16] = N - 1;
  out.rows[17] = 1;
  out.rows[18] = switches;
  out.rows[19] = L;
  out.rows[20] = switches;
  out.rows[21] = admissible;
  if (options.priority_extension) out.rows[23] = strictly_ordered;
  if (options.max_servers) out.rows[kBudgetFamily] = V > 0 ? 1 : 0;
  return out;
}

}  // namespace sfc
