#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "qgame/errors.hpp"
#include "qgame/evolve.hpp"
#include "qgame/game.hpp"
#include "qgame/rng.hpp"

using namespace qgame;

namespace {

// Closed form of the iterated moving average after the sequence `deltas`:
// ((m-1)/m)^t * initial + (1/m) * sum_k ((m-1)/m)^(t-k) * delta_k.
// Evaluated in extended precision; this is the test oracle for Eq.-style
// updates, independent of update_moving_average.
double closed_form_average(double initial, const std::vector<double>& deltas,
                           int m) {
  const long double fade = (static_cast<long double>(m) - 1.0L) / m;
  long double value =
      powl(fade, static_cast<long double>(deltas.size())) * initial;
  for (size_t k = 0; k < deltas.size(); ++k) {
    value += powl(fade, static_cast<long double>(deltas.size() - 1 - k)) *
             deltas[k] / m;
  }
  return static_cast<double>(value);
}

EvolutionConfig base_config() {
  EvolutionConfig config;
  config.m = 10;
  config.d = 3.0;
  config.steps = 1000;
  config.seed = 4242;
  config.variant = Variant::classical;
  config.source = SourceSpec{SourceMode::fixed0};
  return config;
}

}  // namespace

TEST_CASE("moving average basics") {
  CHECK(update_moving_average(17.0, 5.0, 1) == 5.0);
  CHECK(update_moving_average(4.0, 2.0, 2) == 3.0);
  CHECK_THROWS_AS(update_moving_average(1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("iterated updates match the closed form") {
  RngStream rng(21);
  for (int m : {1, 2, 5, 30}) {
    for (int sequence = 0; sequence < 100; ++sequence) {
      std::vector<double> deltas(1000);
      for (double& d : deltas) d = rng.next_double() * 10.0;
      const double initial = rng.next_double() * 10.0;
      double iterated = initial;
      for (double d : deltas) iterated = update_moving_average(iterated, d, m);
      CHECK(std::abs(iterated - closed_form_average(initial, deltas, m)) <
            1e-12);
    }
  }
}

TEST_CASE("mutations respect threshold, trial period and spacing") {
  EvolutionConfig config = base_config();
  config.steps = 20000;
  config.m = 7;
  config.trial_period = 7;
  const PayoffTable table = reference_table();
  const DistributionCache cache;
  Simulation sim(config, table, cache);

  std::array<int64_t, 3> last_mutation{};  // initial strategies adopted at 0
  for (int64_t t = 1; t <= config.steps; ++t) {
    const auto before = sim.agents();
    const RoundRecord record = sim.step();
    const auto after = sim.agents();
    for (size_t i = 0; i < 3; ++i) {
      const double score_after_payoff = update_moving_average(
          before[i].score, record.payoffs[i], config.m);
      const bool eligible =
          before[i].trial_remaining == 0 && score_after_payoff < config.d;
      CHECK(record.mutated[i] == eligible);
      if (record.mutated[i]) {
        CHECK(after[i].move != before[i].move);  // mutation changes the move
        CHECK(after[i].trial_remaining == config.trial_period);
        CHECK(t - last_mutation[i] >= config.trial_period + 1);
        last_mutation[i] = t;
        CHECK(after[i].rounds_held == 0);
      }
      CHECK(after[i].trial_remaining <= config.trial_period);
    }
  }
}

TEST_CASE("forced mutations pick the two alternatives 50:50") {
  // d above every payoff makes every agent mutate at each opportunity.
  EvolutionConfig config = base_config();
  config.d = 100.0;
  config.m = 1;
  config.trial_period = 1;
  config.steps = 60000;
  const PayoffTable table = reference_table();
  const DistributionCache cache;
  Simulation sim(config, table, cache);

  std::map<std::pair<int, int>, int64_t> transitions;
  int64_t total = 0;
  for (int64_t t = 1; t <= config.steps; ++t) {
    const auto before = sim.agents();
    const RoundRecord record = sim.step();
    const auto after = sim.agents();
    for (size_t i = 0; i < 3; ++i) {
      if (!record.mutated[i]) continue;
      ++transitions[{static_cast<int>(before[i].move),
                     static_cast<int>(after[i].move)}];
      ++total;
    }
  }
  CHECK(total > 10000);
  for (int from = 0; from < 3; ++from) {
    int64_t row = 0;
    for (int to = 0; to < 3; ++to) row += transitions[{from, to}];
    for (int to = 0; to < 3; ++to) {
      if (to == from) {
        CHECK(transitions[{from, to}] == 0);
        continue;
      }
      const double freq = static_cast<double>(transitions[{from, to}]) /
                          static_cast<double>(row);
      CHECK(std::abs(freq - 0.5) < 0.01);
    }
  }
}

TEST_CASE("scores stay inside the convex hull of start and payoffs") {
  EvolutionConfig config = base_config();
  config.m = 3;
  config.steps = 30000;
  const PayoffTable table = reference_table();
  const DistributionCache cache;
  Simulation sim(config, table, cache);
  const double lo = std::min(config.d, table.min_payoff());
  const double hi = std::max(config.d, table.max_payoff());
  for (int64_t t = 1; t <= config.steps; ++t) {
    sim.step();
    for (const AgentState& agent : sim.agents()) {
      CHECK(agent.score >= lo - 1e-12);
      CHECK(agent.score <= hi + 1e-12);
    }
  }
}

TEST_CASE("a one-step run reduces to that round's payoffs") {
  EvolutionConfig config = base_config();
  config.steps = 1;
  const PayoffTable table = reference_table();
  std::vector<RoundRecord> records;
  RunOptions options;
  options.record_sink = [&records](const RoundRecord& r) {
    records.push_back(r);
  };
  const RunSummary summary = run(config, table, options);
  REQUIRE(records.size() == 1);
  CHECK(summary.mean_total_payout ==
        records[0].payoffs[0] + records[0].payoffs[1] + records[0].payoffs[2]);
  CHECK(summary.mutation_count == 0);
  CHECK(!summary.mean_lifetime.has_value());
}

TEST_CASE("equal configs and seeds replay bit-identical summaries") {
  EvolutionConfig config = base_config();
  config.steps = 50000;
  config.variant = Variant::quantum;
  config.m = 6;
  const PayoffTable table = reference_table();
  const RunSummary a = run(config, table);
  const RunSummary b = run(config, table);
  CHECK(a == b);

  EvolutionConfig other = config;
  other.seed = config.seed + 1;
  CHECK(run(other, table) != a);
}

TEST_CASE("occupancy fractions sum to one") {
  EvolutionConfig config = base_config();
  config.steps = 20000;
  config.burn_in = 500;
  const RunSummary summary = run(config, reference_table());
  double total = 0.0;
  for (double occ : summary.profile_occupancy) total += occ;
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("classical results do not depend on the source orientation") {
  EvolutionConfig config = base_config();
  config.steps = 1000000;
  config.m = 10;
  config.seed = 97;
  const PayoffTable table = reference_table();
  config.source = SourceSpec{SourceMode::fixed0};
  const RunSummary s0 = run(config, table);
  config.source = SourceSpec{SourceMode::fixed1};
  config.seed = 98;
  const RunSummary s1 = run(config, table);
  const double diff = std::abs(s0.mean_total_payout - s1.mean_total_payout);
  CHECK(diff / s0.mean_total_payout < 0.02);
}

TEST_CASE("a threshold strictly below 2 freezes the classical game") {
  // At the all-flip profile each agent earns exactly 2 per round, so any
  // d < 2 is eventually satisfied and the dynamics lock in.
  EvolutionConfig config = base_config();
  config.d = 1.9;
  config.m = 10;
  config.steps = 100000;
  config.burn_in = 20000;
  const PayoffTable table = reference_table();
  const StrategyProfile dse{{Move::flip, Move::flip, Move::flip}};

  int64_t late_mutations = 0;
  RunOptions options;
  options.record_sink = [&](const RoundRecord& r) {
    if (r.t > config.burn_in + config.steps / 2) {
      late_mutations += r.mutated[0] + r.mutated[1] + r.mutated[2];
    }
  };
  for (uint64_t seed : {1u, 2u, 3u}) {
    late_mutations = 0;
    config.seed = seed;
    const RunSummary summary = run(config, table, options);
    CHECK(summary.profile_occupancy[static_cast<size_t>(dse.index())] > 0.99);
    CHECK(late_mutations == 0);
  }
}

TEST_CASE("mix50 sources draw a fresh fair bit each round") {
  EvolutionConfig config = base_config();
  config.variant = Variant::quantum;
  config.source = SourceSpec{SourceMode::mix50};
  config.steps = 200000;
  config.m = 2;
  // With everyone flipping, outcome 111 appears only from source 0 and 000
  // only from source 1; a frozen run would show both at rate ~1/2. Rather
  // than freeze the run, check the aggregate: the mix of outcomes matches
  // neither fixed source alone.
  const RunSummary mixed = run(config, reference_table());
  config.source = SourceSpec{SourceMode::fixed0};
  const RunSummary fixed0 = run(config, reference_table());
  CHECK(mixed != fixed0);
}

TEST_CASE("config validation rejects bad parameters") {
  EvolutionConfig config = base_config();
  config.m = 0;
  CHECK_THROWS_AS(run(config, reference_table()), ConfigError);
  config = base_config();
  config.steps = 0;
  CHECK_THROWS_AS(run(config, reference_table()), ConfigError);
}
