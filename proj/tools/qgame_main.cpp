// Command-line front end: single runs, m-sweeps, static payoff tables,
// table validation, equilibrium reports and attractor transition graphs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgame/analysis.hpp"
#include "qgame/errors.hpp"
#include "qgame/evolve.hpp"
#include "qgame/game.hpp"
#include "qgame/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTableFormat = 3;
constexpr int kExitTableConstraint = 4;
constexpr int kExitRuntime = 5;

struct CommonArgs {
  std::string config_path;
  std::string table_path;
  std::optional<std::string> variant;
  std::optional<std::string> source;
  std::optional<int> m;
  std::optional<double> d;
  std::optional<int> trial_period;
  std::optional<int64_t> steps;
  std::optional<int64_t> burn_in;
  std::optional<uint64_t> seed;
  std::optional<std::string> summary_path;
  std::optional<std::string> trace_path;
  std::optional<std::string> transitions_path;
  std::optional<double> naming_threshold;
  int phase = 0;
  bool allow_invalid_table = false;
};

void add_common_options(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "Run configuration file (key = value lines)");
  cmd->add_option("--table", args->table_path, "Payoff table file");
  cmd->add_option("--variant", args->variant,
                  "Game variant: classical or quantum (comma list in sweeps)");
  cmd->add_option("--source", args->source,
                  "Qubit source: 0, 1 or mix (comma list in sweeps)");
  cmd->add_option("--m", args->m, "Memory length");
  cmd->add_option("--d", args->d, "Mutation threshold (default 3.0)");
  cmd->add_option("--trial-period", args->trial_period,
                  "Trial period Y (default m)");
  cmd->add_option("--steps", args->steps, "Measured rounds (default 1e7)");
  cmd->add_option("--burn-in", args->burn_in,
                  "Rounds discarded before measuring (default 0)");
  cmd->add_option("--seed", args->seed, "Master seed (default 1)");
  cmd->add_option("--summary", args->summary_path, "summary.csv output path");
  cmd->add_option("--trace", args->trace_path, "trace.csv output path");
  cmd->add_option("--transitions", args->transitions_path,
                  "transitions.csv output path");
  cmd->add_option("--naming-threshold", args->naming_threshold,
                  "Occupancy needed for a named transition node (default 0.01)");
  cmd->add_flag("--allow-invalid-table", args->allow_invalid_table,
                "Run even if the table fails C1-C4");
}

qgame::RunConfig build_config(const CommonArgs& args) {
  qgame::RunConfig config;
  if (!args.config_path.empty()) {
    config = qgame::parse_config_file(args.config_path);
  }
  // Command-line flags override file values.
  if (args.variant) {
    qgame::apply_config_line(config, "variant", *args.variant, "--variant");
  }
  if (args.source) {
    qgame::apply_config_line(config, "source", *args.source, "--source");
  }
  if (args.m) config.ms = {*args.m};
  if (args.d) config.d = *args.d;
  if (args.trial_period) config.trial_period = *args.trial_period;
  if (args.steps) config.steps = *args.steps;
  if (args.burn_in) config.burn_in = *args.burn_in;
  if (args.seed) config.seed = *args.seed;
  if (!args.table_path.empty()) config.table_path = args.table_path;
  if (args.summary_path) config.summary_path = *args.summary_path;
  if (args.trace_path) config.trace_path = *args.trace_path;
  if (args.transitions_path) config.transitions_path = *args.transitions_path;
  if (args.naming_threshold) config.naming_threshold = *args.naming_threshold;
  return config;
}

// Loads and gates the payoff table; on constraint failure prints the report
// and exits unless --allow-invalid-table was given.
qgame::PayoffTable load_gated_table(const qgame::RunConfig& config,
                                    bool allow_invalid) {
  if (config.table_path.empty()) {
    throw qgame::ConfigError("no payoff table given (--table or table_path)");
  }
  qgame::PayoffTable table = qgame::load_table(config.table_path);
  const qgame::ValidationReport report = qgame::validate_table(table);
  if (!report.all_passed()) {
    std::cerr << "payoff table fails validation:\n" << report.str();
    if (!allow_invalid) {
      throw qgame::ValidationError(
          "table constraint failure (use --allow-invalid-table to override)");
    }
    std::cerr << "continuing anyway (--allow-invalid-table)\n";
  }
  return table;
}

void print_summary(const qgame::SweepRow& row) {
  std::cout << "m=" << row.m << " variant=" << qgame::variant_token(row.variant)
            << " source=" << row.source.token() << " seed=" << row.seed
            << " steps=" << row.steps << "\n"
            << "  mean_total_payout = "
            << qgame::format_double(row.summary.mean_total_payout) << "\n"
            << "  mean_lifetime     = "
            << (row.summary.mean_lifetime
                    ? qgame::format_double(*row.summary.mean_lifetime)
                    : "undefined (no completed lifetimes)")
            << "\n"
            << "  mutation_count    = " << row.summary.mutation_count << "\n";
}

int cmd_run(const CommonArgs& args, bool transitions_only) {
  const qgame::RunConfig config = build_config(args);
  const qgame::PayoffTable table =
      load_gated_table(config, args.allow_invalid_table);
  qgame::EvolutionConfig run_config = config.single_run();

  std::ofstream trace;
  qgame::RunOptions options;
  if (!config.trace_path.empty()) {
    trace.open(config.trace_path, std::ios::binary);
    if (!trace) {
      throw std::runtime_error("cannot write '" + config.trace_path + "'");
    }
    trace << qgame::trace_csv_header() << '\n';
    options.record_sink = [&trace](const qgame::RoundRecord& record) {
      trace << qgame::trace_csv_row(record) << '\n';
    };
  }
  std::vector<uint8_t> profile_series;
  const bool want_transitions = !config.transitions_path.empty();
  if (want_transitions) {
    profile_series.reserve(static_cast<size_t>(run_config.steps));
    options.profile_series = &profile_series;
  }

  const qgame::RunSummary summary = qgame::run(run_config, table, options);

  qgame::SweepRow row;
  row.m = run_config.m;
  row.variant = run_config.variant;
  row.source = run_config.source;
  row.seed = run_config.seed;
  row.steps = run_config.steps;
  row.summary = summary;
  if (!transitions_only) print_summary(row);
  if (!config.summary_path.empty()) {
    qgame::write_summary_csv(config.summary_path, {row});
  }
  if (want_transitions) {
    const qgame::TransitionGraph graph = qgame::attractor_transitions(
        profile_series, run_config.m, config.naming_threshold);
    qgame::write_transitions_csv(config.transitions_path, graph);
    if (transitions_only) {
      std::cout << "transition graph over " << graph.samples
                << " samples written to " << config.transitions_path << "\n";
      for (const auto& node : graph.nodes) {
        std::cout << "  node " << node.name
                  << " occupancy=" << qgame::format_double(node.occupancy)
                  << "\n";
      }
    }
  } else if (transitions_only) {
    throw qgame::ConfigError(
        "transitions needs an output path (--transitions)");
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, int jobs) {
  const qgame::RunConfig config = build_config(args);
  const qgame::PayoffTable table =
      load_gated_table(config, args.allow_invalid_table);
  if (config.summary_path.empty()) {
    throw qgame::ConfigError("sweep needs a summary output path (--summary)");
  }
  const qgame::SweepOutcome outcome = qgame::run_sweep(config, table, jobs);
  if (!outcome.failures.empty()) {
    // Partial results: keep what finished, leave a marker beside it.
    qgame::write_summary_csv(config.summary_path, outcome.rows);
    std::ofstream marker(config.summary_path + ".partial", std::ios::binary);
    for (const std::string& failure : outcome.failures) {
      marker << failure << '\n';
      std::cerr << "sweep cell failed: " << failure << '\n';
    }
    return kExitRuntime;
  }
  qgame::write_summary_csv(config.summary_path, outcome.rows);
  std::cout << outcome.rows.size() << " sweep rows written to "
            << config.summary_path << "\n";
  return kExitOk;
}

int cmd_static_table(const CommonArgs& args, const std::string& out_path) {
  const qgame::RunConfig config = build_config(args);
  const qgame::PayoffTable table =
      load_gated_table(config, args.allow_invalid_table);
  std::vector<qgame::Variant> variants = {qgame::Variant::classical,
                                          qgame::Variant::quantum};
  if (args.variant) {
    auto v = qgame::parse_variant(*args.variant);
    if (!v) throw qgame::ConfigError("unknown variant '" + *args.variant + "'");
    variants = {*v};
  }
  std::vector<qgame::StaticTableRow> rows;
  for (qgame::Variant variant : variants) {
    auto more = qgame::static_table_rows(variant, table);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  std::cout << qgame::render_static_table(rows);
  if (!out_path.empty()) {
    qgame::write_static_table_csv(out_path, rows);
    std::cout << "written to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_validate_table(const CommonArgs& args) {
  std::string path = args.table_path;
  if (path.empty() && !args.config_path.empty()) {
    path = qgame::parse_config_file(args.config_path).table_path;
  }
  if (path.empty()) {
    throw qgame::ConfigError("no payoff table given (--table)");
  }
  const qgame::PayoffTable table = qgame::load_table(path);
  const qgame::ValidationReport report = qgame::validate_table(table);
  std::cout << report.str();
  return report.all_passed() ? kExitOk : kExitTableConstraint;
}

int cmd_equilibria(const CommonArgs& args, int s) {
  const qgame::RunConfig config = build_config(args);
  const qgame::PayoffTable table =
      load_gated_table(config, args.allow_invalid_table);
  std::vector<qgame::Variant> variants = {qgame::Variant::classical,
                                          qgame::Variant::quantum};
  if (args.variant) {
    auto v = qgame::parse_variant(*args.variant);
    if (!v) throw qgame::ConfigError("unknown variant '" + *args.variant + "'");
    variants = {*v};
  }
  for (qgame::Variant variant : variants) {
    const qgame::EquilibriumReport report =
        qgame::find_equilibria(variant, s, table);
    std::cout << report.str();
    for (const qgame::StrategyProfile& profile : report.nash) {
      const qgame::PayoffTriple e =
          qgame::expected_payoffs(profile, s, variant, table);
      std::cout << "  " << profile.str() << " pays ("
                << qgame::format_double(e[0]) << ", "
                << qgame::format_double(e[1]) << ", "
                << qgame::format_double(e[2]) << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated three-player quantum game simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation");
  add_common_options(run_cmd, &run_args);

  CommonArgs sweep_args;
  int jobs = 1;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run every (m, variant, source) cell");
  add_common_options(sweep_cmd, &sweep_args);
  sweep_cmd->add_option("--jobs", jobs, "Concurrent cells (default 1)");

  CommonArgs static_args;
  std::string static_out;
  CLI::App* static_cmd = app.add_subcommand(
      "static-table", "Expected payoffs for the 10 profile classes");
  add_common_options(static_cmd, &static_args);
  static_cmd->add_option("--out", static_out, "static_table.csv output path");

  CommonArgs validate_args;
  CLI::App* validate_cmd =
      app.add_subcommand("validate-table", "Check constraints C1-C4");
  add_common_options(validate_cmd, &validate_args);

  CommonArgs eq_args;
  int eq_source = 0;
  CLI::App* eq_cmd = app.add_subcommand(
      "equilibria", "Dominant strategies and Nash equilibria");
  add_common_options(eq_cmd, &eq_args);
  eq_cmd->add_option("--s", eq_source, "Fixed source bit (0 or 1)")
      ->check(CLI::Range(0, 1));

  CommonArgs trans_args;
  CLI::App* trans_cmd = app.add_subcommand(
      "transitions", "Run one simulation and emit its transition graph");
  add_common_options(trans_cmd, &trans_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args, false);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, jobs);
    if (static_cmd->parsed()) return cmd_static_table(static_args, static_out);
    if (validate_cmd->parsed()) return cmd_validate_table(validate_args);
    if (eq_cmd->parsed()) return cmd_equilibria(eq_args, eq_source);
    if (trans_cmd->parsed()) return cmd_run(trans_args, true);
  } catch (const qgame::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qgame::FormatError& e) {
    std::cerr << "table format error: " << e.what() << "\n";
    return kExitTableFormat;
  } catch (const qgame::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitTableConstraint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
