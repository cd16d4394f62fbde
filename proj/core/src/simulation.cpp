#include "sfc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>

namespace sfc {

namespace {

// Two-sided 95% Student t quantile for 19 degrees of freedom (20 batches).
constexpr double kT19 = 2.093;

struct BatchMeans {
  explicit BatchMeans(int batches) : sum(static_cast<std::size_t>(batches), 0.0), count(sum.size(), 0) {}

  void add(std::size_t batch, double value) {
    batch = std::min(batch, sum.size() - 1);
    sum[batch] += value;
    ++count[batch];
  }

  // Half-width of a 95% interval for the mean, from the spread of batch means.
  double half_width() const {
    std::vector<double> means;
    for (std::size_t b = 0; b < sum.size(); ++b) {
      if (count[b] > 0) means.push_back(sum[b] / static_cast<double>(count[b]));
    }
    if (means.size() < 2) return 0.0;
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(means.size());
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(means.size() - 1);
    return kT19 * std::sqrt(var / static_cast<double>(means.size()));
  }

  std::vector<double> sum;
  std::vector<std::uint64_t> count;
};

double exponential(std::mt19937_64& rng, double rate) { return std::exponential_distribution<double>(rate)(rng); }

}  // namespace

QueueSimResult simulate_queue(const QueueParams& q, std::uint64_t packets, std::uint64_t seed) {
  if (!(q.service_rate > 0.0) || q.capacity < 1 || !(q.arrival_rate > 0.0)) {
    throw InputError("simulate_queue: need positive rates and capacity");
  }
  std::mt19937_64 rng(seed);
  std::deque<double> departures;  // departure times of packets in the system
  const std::uint64_t warmup = packets / 100;
  const auto capacity = static_cast<std::size_t>(q.capacity);
  QueueSimResult out;
  BatchMeans batches(20);
  double now = 0.0;
  double sojourn_sum = 0.0;
  std::uint64_t accepted = 0;
  const std::uint64_t measured = packets - warmup;
  for (std::uint64_t n = 0; n < packets; ++n) {
    now += exponential(rng, q.arrival_rate);
    while (!departures.empty() && departures.front() <= now) departures.pop_front();
    const bool measure = n >= warmup;
    if (measure) ++out.arrivals;
    if (departures.size() >= capacity) {
      if (measure) ++out.dropped;
      continue;
    }
    const double start = departures.empty() ? now : departures.back();
    const double leave = start + exponential(rng, q.service_rate);
    departures.push_back(leave);
    if (measure) {
      const double sojourn = leave - now;
      sojourn_sum += sojourn;
      ++accepted;
      batches.add(static_cast<std::size_t>((n - warmup) * 20 / measured), sojourn);
    }
  }
  out.mean_sojourn = accepted > 0 ? sojourn_sum / static_cast<double>(accepted) : 0.0;
  out.sojourn_half_width = batches.half_width();
  out.drop_fraction = out.arrivals > 0 ? static_cast<double>(out.dropped) / static_cast<double>(out.arrivals) : 0.0;
  return out;
}

PathSimResult simulate_resend_path(std::span<const HopCost> path, std::uint64_t packets, std::uint64_t seed) {
  PathSimResult out;
  if (path.empty() || packets == 0) return out;
  for (const HopCost& h : path) {
    if (!(h.drop_probability >= 0.0 && h.drop_probability < 1.0) || !(h.latency >= 0.0)) {
      throw InputError("simulate_resend_path: invalid hop");
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto visit = [&](std::size_t n) { return path[n].latency > 0.0 ? exponential(rng, 1.0 / path[n].latency) : 0.0; };

  // Time to get a packet through nodes 0..n, retrying from node 0 on drops.
  auto through = [&](auto&& self, std::size_t n) -> double {
    if (n == 0) return visit(0);
    double elapsed = 0.0;
    for (;;) {
      elapsed += self(self, n - 1);
      if (unit(rng) >= path[n].drop_probability) break;
      ++out.resends;
    }
    return elapsed + visit(n);
  };

  BatchMeans batches(20);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < packets; ++k) {
    const double t = through(through, path.size() - 1);
    sum += t;
    batches.add(static_cast<std::size_t>(k * 20 / packets), t);
  }
  out.packets = packets;
  out.mean_latency = sum / static_cast<double>(packets);
  out.half_width = batches.half_width();
  return out;
}

namespace {

struct Event {
  double time;
  std::uint64_t order;
  bool departure;  // otherwise a chain arrival
  std::uint32_t id;  // node for departures, chain for arrivals

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    return order > other.order;
  }
};

struct Packet {
  std::uint32_t chain = 0;
  std::uint32_t route = 0;
  std::uint32_t position = 0;
  double birth = 0.0;
  double node_arrival = 0.0;
};

struct Station {
  double service_rate = 0.0;
  std::size_t capacity = 0;
  std::deque<std::uint32_t> queue;
  double busy_since = 0.0;
  double busy_time = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t drops = 0;
  std::uint64_t served = 0;
  double sojourn_sum = 0.0;
};

}  // namespace

LatencyReport simulate(const Instance& instance, const Provisioning& p, const LatencyConfig& latency,
                       const SimulationConfig& config) {
  if (!(config.horizon > 0.0) || config.batches < 2 || !(config.warmup_fraction >= 0.0 && config.warmup_fraction < 1.0)) {
    throw InputError("simulate: invalid simulation configuration");
  }
  const Topology& t = instance.topology();
  const auto& chains = instance.workload().chains();
  const auto routes = node_sequences(instance, p);

  std::vector<Station> stations(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto n = static_cast<NodeIndex>(i);
    stations[i].capacity = static_cast<std::size_t>(latency.capacity_for(t, n));
    if (t.is_server(n)) {
      if (auto v = p.vnf_on(n)) stations[i].service_rate = instance.gamma(n, *v).value_or(0.0);
    } else {
      stations[i].service_rate = t.mu(n);
    }
  }

  std::vector<std::vector<double>> cumulative(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    double acc = 0.0;
    for (const NodeSequence& s : routes[c]) {
      for (NodeIndex n : s.nodes) {
        if (!(stations[n].service_rate > 0.0)) throw InputError("simulate: route visits a node with no service rate");
      }
      acc += s.probability;
      cumulative[c].push_back(acc);
    }
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t order = 0;
  std::vector<Packet> packets;
  std::vector<std::uint32_t> free_slots;
  const double warm = config.warmup_fraction * config.horizon;
  const double window = config.horizon - warm;

  std::vector<BatchMeans> batches(chains.size(), BatchMeans(config.batches));
  std::vector<double> latency_sum(chains.size(), 0.0);
  std::vector<std::uint64_t> samples(chains.size(), 0);

  for (std::size_t c = 0; c < chains.size(); ++c) {
    if (routes[c].empty()) continue;
    events.push({exponential(rng, chains[c].lambda), order++, false, static_cast<std::uint32_t>(c)});
  }

  double now = 0.0;
  auto measuring = [&] { return now >= warm; };

  auto arrive = [&](std::uint32_t id) {
    for (;;) {
      Packet& pkt = packets[id];
      const NodeIndex node = routes[pkt.chain][pkt.route].nodes[pkt.position];
      Station& st = stations[node];
      if (measuring()) ++st.arrivals;
      if (pkt.position > 0 && st.queue.size() >= st.capacity) {
        if (measuring()) ++st.drops;
        pkt.position = 0;  // resend from the source
        continue;
      }
      pkt.node_arrival = now;
      st.queue.push_back(id);
      if (st.queue.size() == 1) {
        st.busy_since = now;
        events.push({now + exponential(rng, st.service_rate), order++, true, node});
      }
      return;
    }
  };

  while (!events.empty()) {
    const Event ev = events.top();
    events.pop();
    now = ev.time;
    if (!ev.departure) {
      const std::uint32_t c = ev.id;
      if (now > config.horizon) continue;  // arrivals stop; in-flight packets drain
      events.push({now + exponential(rng, chains[c].lambda), order++, false, c});
      std::uint32_t id;
      if (!free_slots.empty()) {
        id = free_slots.back();
        free_slots.pop_back();
      } else {
        id = static_cast<std::uint32_t>(packets.size());
        packets.emplace_back();
      }
      const auto& cum = cumulative[c];
      const double u = unit(rng) * cum.back();
      const auto route = static_cast<std::uint32_t>(
          std::min<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), cum.size() - 1));
      packets[id] = Packet{c, route, 0, now, now};
      arrive(id);
      continue;
    }

    Station& st = stations[ev.id];
    const std::uint32_t id = st.queue.front();
    st.queue.pop_front();
    if (measuring()) {
      ++st.served;
      st.sojourn_sum += now - packets[id].node_arrival;
    }
    if (st.queue.empty()) {
      st.busy_time += now - std::max(st.busy_since, warm);
    } else {
      events.push({now + exponential(rng, st.service_rate), order++, true, ev.id});
    }
    Packet& pkt = packets[id];
    const auto& nodes = routes[pkt.chain][pkt.route].nodes;
    if (++pkt.position < nodes.size()) {
      arrive(id);
      continue;
    }
    if (pkt.birth >= warm && pkt.birth <= config.horizon) {
      const double total = now - pkt.birth;
      latency_sum[pkt.chain] += total;
      ++samples[pkt.chain];
      const auto batch = static_cast<std::size_t>((pkt.birth - warm) / window * config.batches);
      batches[pkt.chain].add(batch, total);
    }
    free_slots.push_back(id);
  }

  LatencyReport report;
  const double span = std::max(now, config.horizon) - warm;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Station& st = stations[i];
    if (st.arrivals == 0) continue;
    NodeStats s;
    s.node = static_cast<NodeIndex>(i);
    s.arrival_rate = static_cast<double>(st.arrivals) / window;
    s.service_rate = st.service_rate;
    s.capacity = static_cast<int>(st.capacity);
    s.utilization = st.busy_time / span;
    s.latency = st.served > 0 ? st.sojourn_sum / static_cast<double>(st.served) : 0.0;
    s.drop_probability = static_cast<double>(st.drops) / static_cast<double>(st.arrivals);
    s.expected_resends = s.drop_probability < 1.0 ? 1.0 / (1.0 - s.drop_probability) : kUnbounded;
    report.nodes.push_back(s);
  }

  double weight = 0.0;
  double weighted = 0.0;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    ChainResult r;
    r.chain = c;
    r.deployed = p.deployed[c] != 0;
    if (r.deployed) {
      r.samples = samples[c];
      if (samples[c] > 0) {
        r.expected_latency = latency_sum[c] / static_cast<double>(samples[c]);
        r.half_width = batches[c].half_width();
        weight += chains[c].lambda;
        weighted += chains[c].lambda * r.expected_latency;
      }
      if (samples[c] < config.min_samples || r.half_width > config.target_relative_half_width * r.expected_latency) {
        report.converged = false;
      }
    }
    report.chains.push_back(r);
  }
  report.overall = weight > 0.0 ? weighted / weight : 0.0;
  if (!report.converged) report.note = "horizon too small for the requested confidence";
  return report;
}

}  // namespace sfc
