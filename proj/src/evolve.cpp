#include "qgame/evolve.hpp"

#include <stdexcept>
#include <string>

#include "qgame/errors.hpp"

namespace qgame {

void EvolutionConfig::validate() const {
  if (m < 1) throw ConfigError("memory m must be >= 1");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
  if (trial_period < 0) throw ConfigError("trial_period must be >= 1 (or 0 for m)");
}

double update_moving_average(double prev, double delta, int m) {
  if (m < 1) {
    throw std::invalid_argument("memory m must be >= 1, got " +
                                std::to_string(m));
  }
  // Written as two precomputable factors so the simulation loop reproduces
  // this bit for bit.
  const double md = static_cast<double>(m);
  return (md - 1.0) / md * prev + 1.0 / md * delta;
}

Simulation::Simulation(const EvolutionConfig& config, const PayoffTable& table,
                       const DistributionCache& cache)
    : config_(config), table_(table), cache_(cache), rng_(config.seed) {
  config_.validate();
  const int trial = config_.effective_trial_period();
  for (auto& agent : agents_) {
    agent.move = static_cast<Move>(rng_.next_below(3));
    agent.score = config_.d;
    agent.trial_remaining = trial;
    agent.rounds_held = 0;
  }
  last_mutation_round_.fill(0);
  profile_index_ = profile().index();
}

StrategyProfile Simulation::profile() const {
  return {{agents_[0].move, agents_[1].move, agents_[2].move}};
}

RoundRecord Simulation::step() {
  ++round_;
  RoundRecord record;
  record.t = round_;
  record.profile = StrategyProfile::from_index(profile_index_);

  const int s = config_.source.draw(rng_);
  const OutcomeDistribution& dist =
      cache_.get(config_.variant, s, profile_index_);
  record.outcome = sample_outcome(dist, rng_);
  record.payoffs = table_.payoffs[static_cast<size_t>(record.outcome)];

  const int m = config_.m;
  const double fade = (static_cast<double>(m) - 1.0) / static_cast<double>(m);
  const double gain = 1.0 / static_cast<double>(m);

  // Mutation decisions are simultaneous: all use this round's moves and the
  // post-payoff scores.
  for (size_t i = 0; i < 3; ++i) {
    AgentState& agent = agents_[i];
    agent.score = fade * agent.score + gain * record.payoffs[i];
    record.mutated[i] =
        agent.trial_remaining == 0 && agent.score < config_.d;
  }

  for (size_t i = 0; i < 3; ++i) {
    AgentState& agent = agents_[i];
    if (record.mutated[i]) {
      // Switch to one of the other two moves with a 50:50 chance.
      const int current = static_cast<int>(agent.move);
      const int offset = rng_.next_coin() ? 2 : 1;
      agent.move = static_cast<Move>((current + offset) % 3);
      agent.trial_remaining = config_.effective_trial_period();
      last_mutation_round_[i] = round_;
    } else if (agent.trial_remaining > 0) {
      --agent.trial_remaining;
    }
    agent.rounds_held = round_ - last_mutation_round_[i];
  }
  profile_index_ = profile().index();
  return record;
}

RunSummary run(const EvolutionConfig& config, const PayoffTable& table,
               const RunOptions& options) {
  const DistributionCache cache;
  return run(config, table, cache, options);
}

RunSummary run(const EvolutionConfig& config, const PayoffTable& table,
               const DistributionCache& cache, const RunOptions& options) {
  config.validate();
  Simulation sim(config, table, cache);

  // Lifetimes are measured between consecutive mutations of an agent, with
  // the initial strategy counted as adopted at round 0. A mutation at round
  // t ends a strategy of lifetime t - t_previous_mutation.
  std::array<int64_t, 3> adopted_at{};

  RunSummary summary;
  summary.steps = config.steps;
  double total_sum = 0.0;
  double lifetime_sum = 0.0;
  int64_t lifetime_count = 0;
  std::array<int64_t, kProfileCount> occupancy{};

  const int64_t total_rounds = config.burn_in + config.steps;
  for (int64_t t = 1; t <= total_rounds; ++t) {
    const RoundRecord record = sim.step();
    const bool measured = t > config.burn_in;
    for (size_t i = 0; i < 3; ++i) {
      if (record.mutated[i]) {
        if (measured) {
          lifetime_sum += static_cast<double>(t - adopted_at[i]);
          ++lifetime_count;
          ++summary.mutation_count;
        }
        adopted_at[i] = t;
      }
    }
    if (!measured) continue;
    total_sum +=
        record.payoffs[0] + record.payoffs[1] + record.payoffs[2];
    ++occupancy[static_cast<size_t>(record.profile.index())];
    if (options.profile_series != nullptr) {
      options.profile_series->push_back(
          static_cast<uint8_t>(record.profile.index()));
    }
    if (options.record_sink) options.record_sink(record);
  }

  summary.mean_total_payout = total_sum / static_cast<double>(config.steps);
  if (lifetime_count > 0) {
    summary.mean_lifetime = lifetime_sum / static_cast<double>(lifetime_count);
  }
  for (size_t p = 0; p < kProfileCount; ++p) {
    summary.profile_occupancy[p] =
        static_cast<double>(occupancy[p]) / static_cast<double>(config.steps);
  }
  return summary;
}

}  // namespace qgame
