#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qgame/errors.hpp"
#include "qgame/evolve.hpp"
#include "qgame/io.hpp"

using namespace qgame;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "qgame_io_test";
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("the shipped reference table loads and matches the builtin") {
  const PayoffTable table = load_table("data/reference.payoff");
  CHECK(table.payoffs == reference_table().payoffs);
  CHECK(validate_table(table).all_passed());
}

TEST_CASE("table parsing reports malformed input with line numbers") {
  SUBCASE("missing outcome") {
    std::istringstream in(
        "000 0 0 0\n001 0 0 2\n010 0 2 0\n011 1 9 9\n"
        "100 2 0 0\n101 9 1 9\n110 9 9 1\n");
    CHECK_THROWS_WITH_AS(parse_table(in, "t"), "t: missing outcome 111",
                         FormatError);
  }
  SUBCASE("duplicate outcome") {
    std::istringstream in(
        "000 0 0 0\n000 0 0 0\n010 0 2 0\n011 1 9 9\n"
        "100 2 0 0\n101 9 1 9\n110 9 9 1\n111 2 2 2\n");
    CHECK_THROWS_WITH_AS(parse_table(in, "t"), "t:2: duplicate outcome 000",
                         FormatError);
  }
  SUBCASE("non-numeric payoff") {
    std::istringstream in("000 1 x 1\n");
    CHECK_THROWS_AS(parse_table(in, "t"), FormatError);
  }
  SUBCASE("bad outcome label") {
    std::istringstream in("002 1 1 1\n");
    CHECK_THROWS_AS(parse_table(in, "t"), FormatError);
  }
  SUBCASE("comments and blank lines are fine") {
    std::istringstream in(
        "# a table\n\n000 0 0 0 # zeros\n001 0 0 2\n010 0 2 0\n011 1 9 9\n"
        "100 2 0 0\n101 9 1 9\n110 9 9 1\n111 2 2 2\n");
    CHECK(parse_table(in, "t").payoffs == reference_table().payoffs);
  }
}

TEST_CASE("config files parse with defaults and reject unknown keys") {
  TempDir tmp;
  const auto path = tmp.path / "run.conf";
  {
    std::ofstream out(path);
    out << "# a config\n"
        << "variant = quantum\n"
        << "source = 0\n"
        << "m = 12\n"
        << "seed = 99\n"
        << "table_path = data/reference.payoff\n";
  }
  const RunConfig config = parse_config_file(path.string());
  CHECK(config.variants == std::vector<Variant>{Variant::quantum});
  CHECK(config.ms == std::vector<int>{12});
  CHECK(config.seed == 99);
  CHECK(config.d == 3.0);                 // default
  CHECK(config.steps == 10000000);        // default
  CHECK(config.burn_in == 0);             // default
  CHECK(config.trial_period == 0);        // default: use m
  const EvolutionConfig run = config.single_run();
  CHECK(run.effective_trial_period() == 12);

  {
    std::ofstream out(path);
    out << "wibble = 3\n";
  }
  CHECK_THROWS_AS(parse_config_file(path.string()), ConfigError);
}

TEST_CASE("m_range expands to a sweep") {
  TempDir tmp;
  const auto path = tmp.path / "sweep.conf";
  {
    std::ofstream out(path);
    out << "variant = classical,quantum\n"
        << "source = 0,1\n"
        << "m_range = 2..10..4\n";
  }
  const RunConfig config = parse_config_file(path.string());
  CHECK(config.ms == std::vector<int>{2, 6, 10});
  CHECK(config.variants.size() == 2);
  CHECK(config.sources.size() == 2);
  CHECK_THROWS_AS(config.single_run(), ConfigError);
}

TEST_CASE("doubles format with 12 significant digits and a dot") {
  CHECK(format_double(6.0) == "6");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(2.0 / 3.0) == "0.666666666667");
  CHECK(format_double(123456789.0) == "123456789");
}

TEST_CASE("sweeps run every cell with deterministic derived seeds") {
  RunConfig config;
  config.variants = {Variant::classical, Variant::quantum};
  config.sources = {SourceSpec{SourceMode::fixed0}};
  config.ms = {2, 4};
  config.steps = 2000;
  config.seed = 5;
  config.table_path = "data/reference.payoff";
  const PayoffTable table = load_table(config.table_path);

  const SweepOutcome serial = run_sweep(config, table, 1);
  const SweepOutcome parallel = run_sweep(config, table, 4);
  REQUIRE(serial.failures.empty());
  REQUIRE(parallel.failures.empty());
  REQUIRE(serial.rows.size() == 4);

  // Rows ordered by (variant, source, m); parallelism changes nothing.
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].summary == parallel.rows[i].summary);
    CHECK(serial.rows[i].seed == parallel.rows[i].seed);
  }
  CHECK(serial.rows[0].variant == Variant::classical);
  CHECK(serial.rows[0].m == 2);
  CHECK(serial.rows[1].m == 4);
  CHECK(serial.rows[2].variant == Variant::quantum);

  // Cell seeds depend only on (master seed, cell), not on the cell list.
  CHECK(serial.rows[1].seed ==
        cell_seed(5, 4, Variant::classical, SourceSpec{SourceMode::fixed0}));
}

TEST_CASE("summary csv reruns are byte-identical") {
  TempDir tmp;
  RunConfig config;
  config.variants = {Variant::classical};
  config.sources = {SourceSpec{SourceMode::fixed0}};
  config.ms = {3, 5};
  config.steps = 5000;
  config.seed = 123;
  const PayoffTable table = reference_table();

  const auto path_a = tmp.path / "a.csv";
  const auto path_b = tmp.path / "b.csv";
  write_summary_csv(path_a.string(), run_sweep(config, table, 2).rows);
  write_summary_csv(path_b.string(), run_sweep(config, table, 2).rows);
  const std::string a = slurp(path_a);
  CHECK(a == slurp(path_b));
  CHECK(a.starts_with(
      "m,variant,source,seed,steps,mean_total_payout,mean_lifetime,"
      "mutation_count\n"));
}

TEST_CASE("transitions csv lists named nodes with probabilities") {
  TempDir tmp;
  std::vector<uint8_t> series;
  for (int window = 0; window < 100; ++window) {
    for (int r = 0; r < 10; ++r) series.push_back(window % 2 ? 0 : 26);
  }
  const TransitionGraph graph = attractor_transitions(series, 10, 0.01);
  const auto path = tmp.path / "transitions.csv";
  write_transitions_csv(path.string(), graph);
  const std::string text = slurp(path);
  CHECK(text.starts_with("from,to,count,probability\n"));
  CHECK(text.find("0-0-0,1/2-1/2-1/2,") != std::string::npos);
  CHECK(text.find("1/2-1/2-1/2,0-0-0,") != std::string::npos);
}

TEST_CASE("trace rows carry round, outcome and mutation flags") {
  RoundRecord record;
  record.t = 17;
  record.profile = StrategyProfile::from_index(5);
  record.outcome = 5;
  record.payoffs = {9.0, 1.0, 9.0};
  record.mutated = {false, true, false};
  CHECK(trace_csv_row(record) == "17,0-1-1/2,101,9,1,9,0,1,0");
}
