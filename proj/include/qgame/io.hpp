#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qgame/analysis.hpp"
#include "qgame/evolve.hpp"
#include "qgame/game.hpp"

namespace qgame {

/// Renders with '.' decimal separator and 12 significant digits, regardless
/// of locale. All CSV output goes through this.
std::string format_double(double value);

/// Parses a payoff table file: 8 lines of "<3-bit outcome> <p1> <p2> <p3>",
/// whitespace-separated, '#' starts a comment. Throws FormatError (with the
/// offending line number) on malformed, missing or duplicate outcomes.
PayoffTable load_table(const std::string& path);
PayoffTable parse_table(std::istream& in, const std::string& origin);

/// Flat key/value run configuration ("key = value" lines, '#' comments).
/// Unknown keys are rejected. Lists (sweeps) use commas for variant/source
/// and "lo..hi" or "lo..hi..step" for m_range.
struct RunConfig {
  std::vector<Variant> variants{Variant::classical};
  std::vector<SourceSpec> sources{SourceSpec{SourceMode::fixed0}};
  std::vector<int> ms{1};
  bool has_m_range = false;

  double d = 3.0;
  int trial_period = 0;  // 0 means "use m"
  int64_t steps = 10'000'000;
  int64_t burn_in = 0;
  uint64_t seed = 1;
  std::string table_path;
  std::string summary_path;
  std::string trace_path;
  std::string transitions_path;
  double naming_threshold = 0.01;

  /// Single-run view of the config; throws ConfigError when the config
  /// actually describes a sweep (multiple cells).
  EvolutionConfig single_run() const;
};

RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value, const std::string& origin);

/// One sweep cell and its reduced results.
struct SweepRow {
  int m = 1;
  Variant variant = Variant::classical;
  SourceSpec source{};
  uint64_t seed = 0;
  int64_t steps = 0;
  RunSummary summary;
};

/// Deterministic per-cell seed: a pure function of the master seed and the
/// cell coordinates, so adding cells to a sweep never perturbs existing ones.
uint64_t cell_seed(uint64_t master_seed, int m, Variant variant,
                   SourceSpec source);

struct SweepOutcome {
  std::vector<SweepRow> rows;           // ordered by (variant, source, m)
  std::vector<std::string> failures;    // one message per failed cell
};

/// Runs every (variant, source, m) cell of the config, up to `jobs` cells
/// concurrently. Row order is independent of scheduling.
SweepOutcome run_sweep(const RunConfig& config, const PayoffTable& table,
                       int jobs);

// --- CSV / text emitters -------------------------------------------------

std::string summary_csv_header();
std::string summary_csv_row(const SweepRow& row);
void write_summary_csv(const std::string& path,
                       const std::vector<SweepRow>& rows);

void write_transitions_csv(const std::string& path,
                           const TransitionGraph& graph);

std::string trace_csv_header();
std::string trace_csv_row(const RoundRecord& record);

/// Per-class expected payoffs in the shape of the static tables: one row
/// per class with s=0, s=1 and 50:50 columns plus per-input averages.
struct StaticTableRow {
  Variant variant;
  int class_index = 0;  // 1-based, enumeration order
  StrategyProfile representative{};
  int multiplicity = 0;
  PayoffTriple e0{}, e1{}, emix{};
  double avg0 = 0.0, avg1 = 0.0, avg_mix = 0.0;
};

std::vector<StaticTableRow> static_table_rows(Variant variant,
                                              const PayoffTable& table);
void write_static_table_csv(const std::string& path,
                            const std::vector<StaticTableRow>& rows);
std::string render_static_table(const std::vector<StaticTableRow>& rows);

}  // namespace qgame
