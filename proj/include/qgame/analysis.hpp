#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgame/evolve.hpp"

namespace qgame {

/// Average over rounds of the three payoffs combined. Throws
/// std::invalid_argument on an empty sequence.
double mean_total_payout(std::span<const RoundRecord> records);

/// Mean strategy lifetime from mutation events in the record stream:
/// samples are the gaps between consecutive mutations of the same agent, so
/// the first observed mutation of an agent opens its window but contributes
/// no sample. Absent when no gap completes. Y is used as a consistency
/// check: the trial-period rule makes every completed lifetime >= Y + 1.
std::optional<double> mean_lifetime(std::span<const RoundRecord> records,
                                    int trial_period);

/// Same reduction, broken down per agent.
std::array<std::optional<double>, 3> per_agent_mean_lifetime(
    std::span<const RoundRecord> records, int trial_period);

/// Attractor-profile transition graph over m-round windows. The node set is
/// the profiles whose sampled occupancy reaches the naming threshold, plus
/// one aggregate node T for everything else.
struct TransitionGraph {
  struct Node {
    std::string name;       // profile string, or "T"
    int profile_index = -1;  // -1 for T
    double occupancy = 0.0;  // fraction of samples at this node
  };

  std::vector<Node> nodes;                    // named profiles first, T last
  std::vector<std::vector<int64_t>> counts;   // counts[from][to]
  std::vector<std::vector<double>> prob;      // row-normalized counts
  int64_t samples = 0;

  std::optional<int> node_of_profile(int profile_index) const;
  bool has_edge(int from_node, int to_node) const;
};

/// Samples the profile series at rounds m, 2m, 3m, ... (shifted by `phase`
/// rounds, 0 <= phase < m) and tallies transitions between consecutive
/// samples. The series holds one profile index per round; it must cover at
/// least 2m rounds.
TransitionGraph attractor_transitions(std::span<const uint8_t> profile_series,
                                      int m, double naming_threshold,
                                      int phase = 0);

}  // namespace qgame
