#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sfc/instance.hpp"

namespace sfc {

struct GenSpec {
  std::size_t servers = 8;  // power of two
  std::size_t tors = 0;     // 0: max(2, servers / 8), capped at servers
  std::size_t agg_switches = 0;  // 0: max(2, tors / 4), capped at tors
  std::size_t chains = 4;
  std::size_t max_chain_len = 4;
  std::size_t vnf_types = 4;
  std::size_t server_types = 2;
  double lambda_min = 1.0;
  double lambda_max = 10.0;
  /// Target ratio of total server work to total server capacity.
  double load = 0.5;
  /// Switch rates are this multiple of the expected traffic through them.
  double mu_headroom = 1.5;
  std::uint64_t seed = 1;

  /// Fills the automatic counts and throws InputError on inconsistent specs.
  GenSpec resolved() const;
};

GenSpec parse_gen_spec(std::string_view json);
std::string dump_gen_spec(const GenSpec& spec);

/// Three-level tree (root, aggregation, TOR, servers) with a random catalog
/// and workload, fully determined by the spec and its seed.
Instance generate(const GenSpec& spec);

}  // namespace sfc
