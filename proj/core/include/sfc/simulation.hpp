#pragma once

#include <cstdint>
#include <span>

#include "sfc/latency.hpp"

namespace sfc {

struct QueueSimResult {
  std::uint64_t arrivals = 0;  // after warm-up
  std::uint64_t dropped = 0;
  double mean_sojourn = 0.0;   // accepted packets only
  double sojourn_half_width = 0.0;
  double drop_fraction = 0.0;
};

/// Simulates a single M/M/1/K queue for `packets` arrivals. The first 1% of
/// arrivals warm the queue up and are not measured.
QueueSimResult simulate_queue(const QueueParams& q, std::uint64_t packets, std::uint64_t seed);

struct PathSimResult {
  double mean_latency = 0.0;
  double half_width = 0.0;
  std::uint64_t packets = 0;
  std::uint64_t resends = 0;
};

/// Monte Carlo of drop-and-resend-from-source over a node sequence: each node
/// visit takes an exponential time with the hop's mean latency, and every
/// node after the first drops an arriving packet with the hop's drop
/// probability, which restarts the packet at the first node.
PathSimResult simulate_resend_path(std::span<const HopCost> path, std::uint64_t packets, std::uint64_t seed);

struct SimulationConfig {
  double horizon = 1000.0;         // simulated seconds
  double warmup_fraction = 0.1;    // packets born earlier are not measured
  std::uint64_t seed = 1;
  int batches = 20;
  double target_relative_half_width = 0.05;
  std::uint64_t min_samples = 1000;
};

/// Discrete-event simulation of the provisioned network: every node is a
/// FIFO M/M/1/K queue, each chain injects Poisson traffic at the root and
/// follows a route drawn from the split fractions, and a packet dropped at a
/// node re-enters at the root. The source (first node) buffers without
/// limit. Runs with equal seeds are identical.
LatencyReport simulate(const Instance& instance, const Provisioning& p, const LatencyConfig& latency,
                       const SimulationConfig& config);

}  // namespace sfc
