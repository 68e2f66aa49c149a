#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qgame/game.hpp"
#include "qgame/rng.hpp"

namespace qgame {

/// One agent of the iterated game.
struct AgentState {
  Move move = Move::flip;
  double score = 0.0;        // the moving average $_m
  int trial_remaining = 0;   // rounds left in the post-mutation trial period
  int64_t rounds_held = 0;   // rounds since the current move was adopted
};

/// Parameters of one evolutionary run.
struct EvolutionConfig {
  int m = 1;                      // memory length of the moving average
  double d = 3.0;                 // mutation threshold
  int trial_period = 0;           // Y; 0 means "use m"
  int64_t steps = 10'000'000;     // measured rounds
  int64_t burn_in = 0;            // rounds discarded before measuring
  uint64_t seed = 1;
  Variant variant = Variant::classical;
  SourceSpec source{};

  int effective_trial_period() const { return trial_period > 0 ? trial_period : m; }
  void validate() const;  // throws ConfigError
};

/// What happened in one round.
struct RoundRecord {
  int64_t t = 0;                   // 1-based round index
  StrategyProfile profile{};       // moves in effect during the round
  int outcome = 0;                 // measured 3-bit outcome
  PayoffTriple payoffs{};          // per-player points, straight from the table
  std::array<bool, 3> mutated{};   // which agents mutated at the end of the round
};

/// Statistics over the measured window of a run.
struct RunSummary {
  int64_t steps = 0;
  double mean_total_payout = 0.0;
  /// Mean completed strategy lifetime; absent when no mutation ended in the
  /// window. Strategies still held at the end of the run are not counted.
  std::optional<double> mean_lifetime;
  int64_t mutation_count = 0;
  std::array<double, kProfileCount> profile_occupancy{};

  bool operator==(const RunSummary&) const = default;
};

/// Eq.-style moving-average update: ((m-1)/m) * prev + (1/m) * delta.
/// Throws std::invalid_argument when m < 1.
double update_moving_average(double prev, double delta, int m);

/// The iterated game as a stepwise engine. One round:
///   1. draw the source bit (mix50 sources only),
///   2. sample the outcome from the cached distribution of the current
///      profile,
///   3. pay each agent and update her moving average,
///   4. agents whose trial has elapsed and whose score is strictly below d
///      mutate simultaneously: each switches to one of the other two moves
///      with a 50:50 chance, records the ended lifetime and starts a fresh
///      trial of Y rounds,
///   5. remaining trial counters tick down; new moves take effect from the
///      next round.
class Simulation {
 public:
  /// `cache` must outlive the simulation. Initial moves are drawn uniformly
  /// from the seed's stream; initial scores start at d with a full trial
  /// period pending, so nothing mutates before real payoffs accumulate.
  Simulation(const EvolutionConfig& config, const PayoffTable& table,
             const DistributionCache& cache);

  RoundRecord step();

  int64_t round() const { return round_; }
  const std::array<AgentState, 3>& agents() const { return agents_; }
  StrategyProfile profile() const;

 private:
  EvolutionConfig config_;
  const PayoffTable& table_;
  const DistributionCache& cache_;
  RngStream rng_;
  std::array<AgentState, 3> agents_;
  std::array<int64_t, 3> last_mutation_round_{};
  int64_t round_ = 0;
  int profile_index_ = 0;

  friend struct RunOptions;
};

struct RunOptions {
  /// Called once per measured round, in order.
  std::function<void(const RoundRecord&)> record_sink;
  /// If set, receives the profile index of every measured round.
  std::vector<uint8_t>* profile_series = nullptr;
};

/// Runs burn_in + steps rounds and reduces the measured window. The result
/// is a pure function of (config, table); reruns are bit-identical.
RunSummary run(const EvolutionConfig& config, const PayoffTable& table,
               const RunOptions& options = {});

RunSummary run(const EvolutionConfig& config, const PayoffTable& table,
               const DistributionCache& cache, const RunOptions& options = {});

}  // namespace qgame
