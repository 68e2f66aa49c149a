#include "qgame/io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "qgame/errors.hpp"

namespace qgame {

std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::string strip(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    out.push_back(strip(text.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

double parse_payoff(const std::string& text, const std::string& origin,
                    int line_number) {
  double value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(origin + ":" + std::to_string(line_number) +
                      ": non-numeric payoff '" + text + "'");
  }
  return value;
}

}  // namespace

PayoffTable parse_table(std::istream& in, const std::string& origin) {
  PayoffTable table;
  std::array<bool, 8> seen{};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream fields(line);
    std::string outcome;
    if (!(fields >> outcome)) continue;  // blank / comment-only line
    if (outcome.size() != 3 ||
        outcome.find_first_not_of("01") != std::string::npos) {
      throw FormatError(origin + ":" + std::to_string(line_number) +
                        ": expected a 3-bit outcome, got '" + outcome + "'");
    }
    const size_t index = static_cast<size_t>((outcome[0] - '0') * 4 +
                                             (outcome[1] - '0') * 2 +
                                             (outcome[2] - '0'));
    if (seen[index]) {
      throw FormatError(origin + ":" + std::to_string(line_number) +
                        ": duplicate outcome " + outcome);
    }
    std::string p1, p2, p3, extra;
    if (!(fields >> p1 >> p2 >> p3)) {
      throw FormatError(origin + ":" + std::to_string(line_number) +
                        ": expected three payoffs after outcome " + outcome);
    }
    if (fields >> extra) {
      throw FormatError(origin + ":" + std::to_string(line_number) +
                        ": trailing field '" + extra + "'");
    }
    table.payoffs[index] = {parse_payoff(p1, origin, line_number),
                            parse_payoff(p2, origin, line_number),
                            parse_payoff(p3, origin, line_number)};
    seen[index] = true;
  }
  for (size_t k = 0; k < 8; ++k) {
    if (!seen[k]) {
      std::string outcome = {static_cast<char>('0' + ((k >> 2) & 1)),
                             static_cast<char>('0' + ((k >> 1) & 1)),
                             static_cast<char>('0' + (k & 1))};
      throw FormatError(origin + ": missing outcome " + outcome);
    }
  }
  return table;
}

PayoffTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open payoff table file '" + path + "'");
  return parse_table(in, path);
}

EvolutionConfig RunConfig::single_run() const {
  if (variants.size() != 1 || sources.size() != 1 || ms.size() != 1) {
    throw ConfigError("config describes a sweep; a single run needs exactly "
                      "one variant, source and m");
  }
  EvolutionConfig config;
  config.m = ms[0];
  config.d = d;
  config.trial_period = trial_period;
  config.steps = steps;
  config.burn_in = burn_in;
  config.seed = seed;
  config.variant = variants[0];
  config.source = sources[0];
  return config;
}

void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value, const std::string& origin) {
  if (key == "variant") {
    config.variants.clear();
    for (const std::string& token : split(value, ',')) {
      auto v = parse_variant(token);
      if (!v) throw ConfigError(origin + ": unknown variant '" + token + "'");
      config.variants.push_back(*v);
    }
    if (config.variants.empty()) {
      throw ConfigError(origin + ": empty variant list");
    }
  } else if (key == "source") {
    config.sources.clear();
    for (const std::string& token : split(value, ',')) {
      auto s = SourceSpec::parse(token);
      if (!s) throw ConfigError(origin + ": unknown source '" + token + "'");
      config.sources.push_back(*s);
    }
    if (config.sources.empty()) {
      throw ConfigError(origin + ": empty source list");
    }
  } else if (key == "m") {
    config.ms = {parse_number<int>(value, "m")};
    config.has_m_range = false;
  } else if (key == "m_range") {
    // "lo..hi" or "lo..hi..step"
    std::vector<std::string> numbers;
    std::string::size_type pos = 0;
    while (true) {
      const auto next = value.find("..", pos);
      numbers.push_back(strip(value.substr(pos, next - pos)));
      if (next == std::string::npos) break;
      pos = next + 2;
    }
    if (numbers.size() != 2 && numbers.size() != 3) {
      throw ConfigError(origin + ": m_range must be 'lo..hi' or 'lo..hi..step'");
    }
    const int lo = parse_number<int>(numbers[0], "m_range low");
    const int hi = parse_number<int>(numbers[1], "m_range high");
    const int step =
        numbers.size() == 3 ? parse_number<int>(numbers[2], "m_range step") : 1;
    if (lo < 1 || hi < lo || step < 1) {
      throw ConfigError(origin + ": bad m_range bounds");
    }
    config.ms.clear();
    for (int m = lo; m <= hi; m += step) config.ms.push_back(m);
    config.has_m_range = true;
  } else if (key == "d") {
    config.d = parse_number<double>(value, "d");
  } else if (key == "trial_period") {
    config.trial_period = parse_number<int>(value, "trial_period");
  } else if (key == "steps") {
    config.steps = parse_number<int64_t>(value, "steps");
  } else if (key == "burn_in") {
    config.burn_in = parse_number<int64_t>(value, "burn_in");
  } else if (key == "seed") {
    config.seed = parse_number<uint64_t>(value, "seed");
  } else if (key == "table_path") {
    config.table_path = value;
  } else if (key == "summary_path") {
    config.summary_path = value;
  } else if (key == "trace_path") {
    config.trace_path = value;
  } else if (key == "transitions_path") {
    config.transitions_path = value;
  } else if (key == "naming_threshold") {
    config.naming_threshold = parse_number<double>(value, "naming_threshold");
  } else {
    throw ConfigError(origin + ": unknown key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  RunConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string stripped = strip(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = strip(stripped.substr(0, eq));
    const std::string value = strip(stripped.substr(eq + 1));
    try {
      apply_config_line(config, key, value,
                        path + ":" + std::to_string(line_number));
    } catch (const FormatError& e) {
      throw ConfigError(e.what());
    }
  }
  return config;
}

uint64_t cell_seed(uint64_t master_seed, int m, Variant variant,
                   SourceSpec source) {
  return RngStream(master_seed)
      .derive({static_cast<uint64_t>(m), static_cast<uint64_t>(variant),
               static_cast<uint64_t>(source.mode)})
      .seed();
}

SweepOutcome run_sweep(const RunConfig& config, const PayoffTable& table,
                       int jobs) {
  struct Cell {
    int m;
    Variant variant;
    SourceSpec source;
  };
  // Row order is (variant, source, m), fixed before any work starts.
  std::vector<Cell> cells;
  for (Variant variant : config.variants) {
    for (SourceSpec source : config.sources) {
      for (int m : config.ms) {
        cells.push_back({m, variant, source});
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  std::vector<std::string> errors(cells.size());
  const DistributionCache cache;

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= cells.size()) return;
      const Cell& cell = cells[index];
      SweepRow& row = rows[index];
      row.m = cell.m;
      row.variant = cell.variant;
      row.source = cell.source;
      row.seed = cell_seed(config.seed, cell.m, cell.variant, cell.source);
      row.steps = config.steps;
      try {
        EvolutionConfig run_config;
        run_config.m = cell.m;
        run_config.d = config.d;
        run_config.trial_period = config.trial_period;
        run_config.steps = config.steps;
        run_config.burn_in = config.burn_in;
        run_config.seed = row.seed;
        run_config.variant = cell.variant;
        run_config.source = cell.source;
        row.summary = run(run_config, table, cache);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "cell m=" << cell.m << " variant=" << variant_token(cell.variant)
            << " source=" << cell.source.token() << ": " << e.what();
        errors[index] = msg.str();
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(thread_count));
  for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  SweepOutcome outcome;
  outcome.rows = std::move(rows);
  for (std::string& e : errors) {
    if (!e.empty()) outcome.failures.push_back(std::move(e));
  }
  return outcome;
}

std::string summary_csv_header() {
  return "m,variant,source,seed,steps,mean_total_payout,mean_lifetime,"
         "mutation_count";
}

std::string summary_csv_row(const SweepRow& row) {
  std::ostringstream out;
  out << row.m << ',' << variant_token(row.variant) << ','
      << row.source.token() << ',' << row.seed << ',' << row.steps << ','
      << format_double(row.summary.mean_total_payout) << ','
      << (row.summary.mean_lifetime ? format_double(*row.summary.mean_lifetime)
                                    : "nan")
      << ',' << row.summary.mutation_count;
  return out.str();
}

void write_summary_csv(const std::string& path,
                       const std::vector<SweepRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << summary_csv_header() << '\n';
  for (const SweepRow& row : rows) out << summary_csv_row(row) << '\n';
}

void write_transitions_csv(const std::string& path,
                           const TransitionGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "from,to,count,probability\n";
  for (size_t from = 0; from < graph.nodes.size(); ++from) {
    for (size_t to = 0; to < graph.nodes.size(); ++to) {
      if (graph.counts[from][to] == 0) continue;
      out << graph.nodes[from].name << ',' << graph.nodes[to].name << ','
          << graph.counts[from][to] << ','
          << format_double(graph.prob[from][to]) << '\n';
    }
  }
}

std::string trace_csv_header() {
  return "t,profile,outcome,payoff1,payoff2,payoff3,mutated1,mutated2,mutated3";
}

std::string trace_csv_row(const RoundRecord& record) {
  std::ostringstream out;
  const std::string outcome = {
      static_cast<char>('0' + ((record.outcome >> 2) & 1)),
      static_cast<char>('0' + ((record.outcome >> 1) & 1)),
      static_cast<char>('0' + (record.outcome & 1))};
  out << record.t << ',' << record.profile.str() << ',' << outcome;
  for (size_t i = 0; i < 3; ++i) out << ',' << format_double(record.payoffs[i]);
  for (size_t i = 0; i < 3; ++i) out << ',' << (record.mutated[i] ? 1 : 0);
  return out.str();
}

std::vector<StaticTableRow> static_table_rows(Variant variant,
                                              const PayoffTable& table) {
  std::vector<StaticTableRow> rows;
  const auto classes = enumerate_profile_classes();
  for (size_t c = 0; c < classes.size(); ++c) {
    StaticTableRow row;
    row.variant = variant;
    row.class_index = static_cast<int>(c) + 1;
    row.representative = classes[c].representative();
    row.multiplicity = classes[c].multiplicity();
    row.e0 = expected_payoffs(row.representative, 0, variant, table);
    row.e1 = expected_payoffs(row.representative, 1, variant, table);
    for (size_t i = 0; i < 3; ++i) row.emix[i] = (row.e0[i] + row.e1[i]) / 2.0;
    row.avg0 = (row.e0[0] + row.e0[1] + row.e0[2]) / 3.0;
    row.avg1 = (row.e1[0] + row.e1[1] + row.e1[2]) / 3.0;
    row.avg_mix = (row.emix[0] + row.emix[1] + row.emix[2]) / 3.0;
    rows.push_back(row);
  }
  return rows;
}

void write_static_table_csv(const std::string& path,
                            const std::vector<StaticTableRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "variant,class,representative,multiplicity,"
         "e1_s0,e2_s0,e3_s0,avg_s0,e1_s1,e2_s1,e3_s1,avg_s1,"
         "e1_mix,e2_mix,e3_mix,avg_mix\n";
  for (const StaticTableRow& row : rows) {
    out << variant_token(row.variant) << ',' << row.class_index << ','
        << row.representative.str() << ',' << row.multiplicity;
    for (size_t i = 0; i < 3; ++i) out << ',' << format_double(row.e0[i]);
    out << ',' << format_double(row.avg0);
    for (size_t i = 0; i < 3; ++i) out << ',' << format_double(row.e1[i]);
    out << ',' << format_double(row.avg1);
    for (size_t i = 0; i < 3; ++i) out << ',' << format_double(row.emix[i]);
    out << ',' << format_double(row.avg_mix) << '\n';
  }
}

namespace {

std::string fixed2(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << v;
  return out.str();
}

std::string triple_text(const PayoffTriple& t, char open, char close) {
  std::string out;
  out += open;
  out += fixed2(t[0]) + " " + fixed2(t[1]) + " " + fixed2(t[2]);
  out += close;
  return out;
}

}  // namespace

std::string render_static_table(const std::vector<StaticTableRow>& rows) {
  // Input-0 payoffs in (...), input-1 in [...], the 50:50 mixture bare;
  // final columns are the per-player averages for each input.
  std::ostringstream out;
  Variant current = Variant::classical;
  bool first = true;
  for (const StaticTableRow& row : rows) {
    if (first || row.variant != current) {
      current = row.variant;
      first = false;
      out << variant_token(current) << " game\n";
      out << "  class  profile      C   payoffs (s=0) / [s=1] / 50:50"
          << std::string(23, ' ') << "avg0   avg1   avg\n";
    }
    std::ostringstream line;
    line << "  " << row.class_index << (row.class_index < 10 ? " " : "")
         << "     ";
    std::string profile = row.representative.str();
    profile.resize(12, ' ');
    line << profile << " " << row.multiplicity << "   ";
    std::string payoffs = triple_text(row.e0, '(', ')') + " " +
                          triple_text(row.e1, '[', ']') + " " +
                          triple_text(row.emix, ' ', ' ');
    payoffs.resize(62, ' ');
    line << payoffs << fixed2(row.avg0) << "   " << fixed2(row.avg1) << "   "
         << fixed2(row.avg_mix);
    out << line.str() << "\n";
  }
  return out.str();
}

}  // namespace qgame
