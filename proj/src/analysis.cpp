#include "qgame/analysis.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "qgame/errors.hpp"

namespace qgame {

double mean_total_payout(std::span<const RoundRecord> records) {
  if (records.empty()) {
    throw std::invalid_argument("mean_total_payout: empty record sequence");
  }
  double sum = 0.0;
  for (const RoundRecord& r : records) {
    sum += r.payoffs[0] + r.payoffs[1] + r.payoffs[2];
  }
  return sum / static_cast<double>(records.size());
}

namespace {

struct LifetimeTally {
  std::array<double, 3> sum{};
  std::array<int64_t, 3> count{};
};

LifetimeTally tally_lifetimes(std::span<const RoundRecord> records,
                              int trial_period) {
  std::array<std::optional<int64_t>, 3> last_mutation;
  LifetimeTally tally;
  for (const RoundRecord& r : records) {
    for (size_t i = 0; i < 3; ++i) {
      if (!r.mutated[i]) continue;
      if (last_mutation[i]) {
        const int64_t lifetime = r.t - *last_mutation[i];
        if (lifetime < trial_period + 1) {
          throw ValidationError(
              "record stream violates the mutation spacing rule");
        }
        tally.sum[i] += static_cast<double>(lifetime);
        ++tally.count[i];
      }
      last_mutation[i] = r.t;
    }
  }
  return tally;
}

}  // namespace

std::optional<double> mean_lifetime(std::span<const RoundRecord> records,
                                    int trial_period) {
  const LifetimeTally tally = tally_lifetimes(records, trial_period);
  const double sum = tally.sum[0] + tally.sum[1] + tally.sum[2];
  const int64_t count = tally.count[0] + tally.count[1] + tally.count[2];
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::array<std::optional<double>, 3> per_agent_mean_lifetime(
    std::span<const RoundRecord> records, int trial_period) {
  const LifetimeTally tally = tally_lifetimes(records, trial_period);
  std::array<std::optional<double>, 3> out;
  for (size_t i = 0; i < 3; ++i) {
    if (tally.count[i] > 0) {
      out[i] = tally.sum[i] / static_cast<double>(tally.count[i]);
    }
  }
  return out;
}

std::optional<int> TransitionGraph::node_of_profile(int profile_index) const {
  for (size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].profile_index == profile_index) return static_cast<int>(n);
  }
  return std::nullopt;
}

bool TransitionGraph::has_edge(int from_node, int to_node) const {
  return counts[static_cast<size_t>(from_node)][static_cast<size_t>(to_node)] >
         0;
}

TransitionGraph attractor_transitions(std::span<const uint8_t> profile_series,
                                      int m, double naming_threshold,
                                      int phase) {
  if (m < 1) throw std::invalid_argument("window m must be >= 1");
  if (phase < 0 || phase >= m) {
    throw std::invalid_argument("phase must be in [0, m)");
  }
  if (profile_series.size() < 2 * static_cast<size_t>(m)) {
    throw std::invalid_argument(
        "profile series must cover at least 2m rounds");
  }

  // Sample at rounds m+phase, 2m+phase, ... (series position r-1 for round r).
  std::vector<uint8_t> samples;
  for (size_t pos = static_cast<size_t>(m + phase) - 1;
       pos < profile_series.size(); pos += static_cast<size_t>(m)) {
    samples.push_back(profile_series[pos]);
  }

  std::array<int64_t, kProfileCount> tally{};
  for (uint8_t p : samples) ++tally[p];

  TransitionGraph graph;
  graph.samples = static_cast<int64_t>(samples.size());

  std::array<int, kProfileCount> node_of;
  node_of.fill(-1);
  for (int p = 0; p < kProfileCount; ++p) {
    const double occupancy = static_cast<double>(tally[static_cast<size_t>(p)]) /
                             static_cast<double>(samples.size());
    if (occupancy >= naming_threshold) {
      node_of[static_cast<size_t>(p)] = static_cast<int>(graph.nodes.size());
      graph.nodes.push_back(
          {StrategyProfile::from_index(p).str(), p, occupancy});
    }
  }
  // T aggregates every profile below the naming threshold.
  const int t_node = static_cast<int>(graph.nodes.size());
  double t_occupancy = 0.0;
  for (int p = 0; p < kProfileCount; ++p) {
    if (node_of[static_cast<size_t>(p)] == -1) {
      node_of[static_cast<size_t>(p)] = t_node;
      t_occupancy += static_cast<double>(tally[static_cast<size_t>(p)]) /
                     static_cast<double>(samples.size());
    }
  }
  graph.nodes.push_back({"T", -1, t_occupancy});

  const size_t node_count = graph.nodes.size();
  graph.counts.assign(node_count, std::vector<int64_t>(node_count, 0));
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    const int from = node_of[samples[k]];
    const int to = node_of[samples[k + 1]];
    ++graph.counts[static_cast<size_t>(from)][static_cast<size_t>(to)];
  }

  graph.prob.assign(node_count, std::vector<double>(node_count, 0.0));
  for (size_t from = 0; from < node_count; ++from) {
    int64_t row_total = 0;
    for (int64_t c : graph.counts[from]) row_total += c;
    if (row_total == 0) continue;
    for (size_t to = 0; to < node_count; ++to) {
      graph.prob[from][to] = static_cast<double>(graph.counts[from][to]) /
                             static_cast<double>(row_total);
    }
  }
  return graph;
}

}  // namespace qgame
