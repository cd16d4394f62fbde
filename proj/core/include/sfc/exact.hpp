#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sfc/mip.hpp"

namespace sfc {

inline constexpr std::size_t kExactMaxServers = 8;
inline constexpr std::size_t kExactMaxPositions = 8;

struct ExactOptions {
  std::optional<std::size_t> max_servers;
  double time_limit = 60.0;  // seconds
  TrafficMode mode = TrafficMode::Physical;
  /// Chains to deploy; empty means all of them.
  std::vector<std::uint8_t> deploy;
};

struct ExactResult {
  SolverResult solver;  // values follow the model naming scheme
  Provisioning provisioning;
  std::uint64_t candidates = 0;  // complete assignments evaluated
};

/// Exhaustive search over unsplit placements of a tiny instance. Every chain
/// position goes wholly to one server; placement is implied by the
/// assignment. The first optimum in lexicographic order of the assignment
/// vector is returned. Throws UnsupportedError beyond the size guard.
ExactResult exact_solve(const Instance& instance, double beta, const ExactOptions& options = {});

/// Priority-aware variant: picks the largest deployable set of chains that
/// respects the priority order, then minimizes the objective on it.
ExactResult exact_two_phase(const Instance& instance, double beta, const ExactOptions& options = {});

/// exact_solve behind the MipBackend interface, for models built by
/// build_model on the same instance (optionally with fixed deployment flags,
/// a budget row, or the phase-1 objective).
MipBackend exact_backend(const Instance& instance, TrafficMode mode, double time_limit = 60.0);

}  // namespace sfc
