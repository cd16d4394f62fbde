#include "sfc/gen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "json_util.hpp"

namespace sfc {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

std::string padded(char prefix, std::size_t value, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t n = count > 0 ? count - 1 : 0; n >= 10; n /= 10) ++width;
  std::string digits = std::to_string(value);
  return std::string(1, prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

double round_to(double v, double step) { return std::max(step, std::round(v / step) * step); }
double round_up(double v, double step) { return std::max(step, std::ceil(v / step) * step); }

}  // namespace

GenSpec GenSpec::resolved() const {
  GenSpec s = *this;
  if (s.servers < 1 || s.servers > 4096 || !std::has_single_bit(s.servers)) {
    throw InputError("gen: servers must be a power of two between 1 and 4096");
  }
  if (s.tors == 0) s.tors = std::min(s.servers, std::max<std::size_t>(2, s.servers / 8));
  if (s.agg_switches == 0) s.agg_switches = std::min(s.tors, std::max<std::size_t>(2, s.tors / 4));
  if (s.tors > s.servers) throw InputError("gen: more TOR switches than servers");
  if (s.agg_switches > s.tors) throw InputError("gen: more aggregation switches than TOR switches");
  if (s.chains < 1) throw InputError("gen: need at least one chain");
  if (s.max_chain_len < 1) throw InputError("gen: max_chain_len must be at least 1");
  if (s.vnf_types < 1 || s.server_types < 1) throw InputError("gen: need at least one VNF type and one server type");
  if (!(s.lambda_min > 0.0) || !(s.lambda_max >= s.lambda_min)) throw InputError("gen: invalid lambda range");
  if (!(s.load > 0.0 && s.load <= 1.0)) throw InputError("gen: load must lie in (0, 1]");
  if (!(s.mu_headroom >= 1.0)) throw InputError("gen: mu_headroom must be at least 1");
  return s;
}

GenSpec parse_gen_spec(std::string_view document) {
  const auto doc = detail::parse_json(document, "gen spec");
  if (!doc.is_object()) throw InputError("gen spec: expected an object");
  GenSpec s;
  auto count = [&](const char* key, std::size_t& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number_unsigned()) throw InputError(std::string("gen spec: \"") + key + "\" must be a non-negative integer");
      out = it->get<std::size_t>();
    }
  };
  auto number = [&](const char* key, double& out) {
    if (auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number()) throw InputError(std::string("gen spec: \"") + key + "\" must be a number");
      out = it->get<double>();
    }
  };
  count("servers", s.servers);
  count("tors", s.tors);
  count("agg_switches", s.agg_switches);
  count("chains", s.chains);
  count("max_chain_len", s.max_chain_len);
  count("vnf_types", s.vnf_types);
  count("server_types", s.server_types);
  number("lambda_min", s.lambda_min);
  number("lambda_max", s.lambda_max);
  number("load", s.load);
  number("mu_headroom", s.mu_headroom);
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw InputError("gen spec: \"seed\" must be a non-negative integer");
    s.seed = it->get<std::uint64_t>();
  }
  return s;
}

std::string dump_gen_spec(const GenSpec& s) {
  detail::json doc;
  doc["servers"] = s.servers;
  doc["tors"] = s.tors;
  doc["agg_switches"] = s.agg_switches;
  doc["chains"] = s.chains;
  doc["max_chain_len"] = s.max_chain_len;
  doc["vnf_types"] = s.vnf_types;
  doc["server_types"] = s.server_types;
  doc["lambda_min"] = s.lambda_min;
  doc["lambda_max"] = s.lambda_max;
  doc["load"] = s.load;
  doc["mu_headroom"] = s.mu_headroom;
  doc["seed"] = s.seed;
  return detail::dump(doc);
}

Instance generate(const GenSpec& input) {
  const GenSpec s = input.resolved();
  Rng rng(s.seed);

  std::vector<std::string> vnf_names;
  for (std::size_t v = 0; v < s.vnf_types; ++v) vnf_names.push_back(padded('v', v, s.vnf_types));
  std::vector<std::string> type_names;
  for (std::size_t k = 0; k < s.server_types; ++k) type_names.push_back(padded('h', k, s.server_types));

  // Workload first: rates are then sized to it.
  std::vector<ServiceChain> chains;
  double total = 0.0;
  double work = 0.0;
  double max_lambda = 0.0;
  std::size_t longest = 1;
  const double log_lo = std::log(s.lambda_min);
  const double log_hi = std::log(s.lambda_max);
  for (std::size_t c = 0; c < s.chains; ++c) {
    ServiceChain chain;
    chain.id = padded('c', c, s.chains);
    const std::size_t q = 1 + rng.index(s.max_chain_len);
    for (std::size_t i = 0; i < q; ++i) chain.vnfs.push_back(static_cast<VnfIndex>(rng.index(s.vnf_types)));
    chain.lambda = round_to(std::exp(rng.uniform(log_lo, log_hi)), 1e-3);
    total += chain.lambda;
    work += chain.lambda * static_cast<double>(q);
    max_lambda = std::max(max_lambda, chain.lambda);
    longest = std::max(longest, q);
    chains.push_back(std::move(chain));
  }

  // Server types differ in speed, VNF types in cost.
  std::vector<double> speed(s.server_types);
  for (std::size_t k = 0; k < s.server_types; ++k) speed[k] = 1.0 + 0.5 * static_cast<double>(k);
  std::vector<double> cost(s.vnf_types);
  for (double& f : cost) f = rng.uniform(0.75, 1.25);
  std::vector<std::size_t> server_type(s.servers);
  for (auto& k : server_type) k = rng.index(s.server_types);

  double mean_factor = 0.0;
  for (std::size_t l = 0; l < s.servers; ++l) mean_factor += speed[server_type[l]];
  mean_factor /= static_cast<double>(s.servers);
  double mean_cost = 0.0;
  for (double f : cost) mean_cost += f;
  mean_cost /= static_cast<double>(s.vnf_types);
  const double min_factor = *std::min_element(speed.begin(), speed.end()) * 0.75;
  // Sized for the target load, and so that any single chain fits on one
  // server below the first utilization limit.
  const double base = std::max(work / (static_cast<double>(s.servers) * s.load * mean_factor * mean_cost),
                               2.0 * max_lambda / min_factor);
  std::vector<GammaEntry> gamma;
  for (std::size_t k = 0; k < s.server_types; ++k) {
    for (std::size_t v = 0; v < s.vnf_types; ++v) {
      gamma.push_back({type_names[k], vnf_names[v], round_up(base * speed[k] * cost[v], 1e-3)});
    }
  }
  VnfCatalog catalog = VnfCatalog::build(type_names, vnf_names, gamma);

  // Topology: switch rates grow with the number of servers below them.
  const double mean_len = work / total;
  auto switch_mu = [&](std::size_t leaves) {
    const double share = static_cast<double>(leaves) / static_cast<double>(s.servers);
    return round_up(s.mu_headroom * (total + 2.0 * total * (mean_len + 1.0) * share +
                                     2.0 * max_lambda * static_cast<double>(longest + 1)),
                    1e-3);
  };
  std::vector<std::size_t> tor_leaves(s.tors, 0);
  for (std::size_t l = 0; l < s.servers; ++l) ++tor_leaves[l * s.tors / s.servers];
  std::vector<std::size_t> agg_leaves(s.agg_switches, 0);
  for (std::size_t t = 0; t < s.tors; ++t) agg_leaves[t * s.agg_switches / s.tors] += tor_leaves[t];

  std::vector<NodeSpec> nodes;
  nodes.push_back({"r", NodeKind::Switch, std::nullopt, switch_mu(s.servers) * 1.25, ""});
  for (std::size_t a = 0; a < s.agg_switches; ++a) {
    nodes.push_back({padded('a', a, s.agg_switches), NodeKind::Switch, "r", switch_mu(agg_leaves[a]) * 1.1, ""});
  }
  for (std::size_t t = 0; t < s.tors; ++t) {
    nodes.push_back({padded('t', t, s.tors), NodeKind::Switch, padded('a', t * s.agg_switches / s.tors, s.agg_switches),
                     switch_mu(tor_leaves[t]), ""});
  }
  for (std::size_t l = 0; l < s.servers; ++l) {
    nodes.push_back({padded('s', l, s.servers), NodeKind::Server, padded('t', l * s.tors / s.servers, s.tors), 0.0,
                     type_names[server_type[l]]});
  }
  for (NodeSpec& n : nodes) {
    if (n.kind == NodeKind::Switch) n.mu = round_up(n.mu, 1e-3);
  }
  return Instance(Topology::build(std::move(nodes), "r"), std::move(catalog), Workload(std::move(chains)));
}

}  // namespace sfc
