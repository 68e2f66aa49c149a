// Python bindings for the core operations: static game analysis, table
// validation, evolutionary runs and attractor transition graphs.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qgame/analysis.hpp"
#include "qgame/evolve.hpp"
#include "qgame/game.hpp"
#include "qgame/io.hpp"

namespace py = pybind11;
using namespace qgame;

namespace {

Move move_from_object(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) {
    const auto move = parse_move(obj.cast<std::string>());
    if (move) return *move;
  } else {
    const double p = obj.cast<double>();
    if (p == 0.0) return Move::flip;
    if (p == 1.0) return Move::stay;
    if (p == 0.5) return Move::coin;
  }
  throw py::value_error("a move is 0, 1 or 0.5 (or '0', '1', '1/2')");
}

StrategyProfile profile_from_object(const py::handle& obj) {
  const py::sequence seq = py::reinterpret_borrow<py::sequence>(obj);
  if (py::len(seq) != 3) {
    throw py::value_error("a profile is a sequence of three moves");
  }
  return StrategyProfile{
      {move_from_object(seq[0]), move_from_object(seq[1]),
       move_from_object(seq[2])}};
}

py::tuple profile_to_tuple(const StrategyProfile& profile) {
  return py::make_tuple(move_p(profile.moves[0]), move_p(profile.moves[1]),
                        move_p(profile.moves[2]));
}

Variant variant_from_string(const std::string& token) {
  const auto v = parse_variant(token);
  if (!v) throw py::value_error("variant must be 'classical' or 'quantum'");
  return *v;
}

SourceSpec source_from_string(const std::string& token) {
  const auto s = SourceSpec::parse(token);
  if (!s) throw py::value_error("source must be '0', '1' or 'mix'");
  return *s;
}

py::dict summary_to_dict(const RunSummary& summary) {
  py::dict out;
  out["steps"] = summary.steps;
  out["mean_total_payout"] = summary.mean_total_payout;
  out["mean_lifetime"] = summary.mean_lifetime
                             ? py::object(py::float_(*summary.mean_lifetime))
                             : py::object(py::none());
  out["mutation_count"] = summary.mutation_count;
  py::dict occupancy;
  for (int idx = 0; idx < kProfileCount; ++idx) {
    const double occ = summary.profile_occupancy[static_cast<size_t>(idx)];
    if (occ > 0.0) {
      occupancy[py::str(StrategyProfile::from_index(idx).str())] = occ;
    }
  }
  out["profile_occupancy"] = occupancy;
  return out;
}

EvolutionConfig config_from_kwargs(int m, const std::string& variant,
                                   const std::string& source, double d,
                                   int trial_period, int64_t steps,
                                   int64_t burn_in, uint64_t seed) {
  EvolutionConfig config;
  config.m = m;
  config.variant = variant_from_string(variant);
  config.source = source_from_string(source);
  config.d = d;
  config.trial_period = trial_period;
  config.steps = steps;
  config.burn_in = burn_in;
  config.seed = seed;
  return config;
}

py::dict graph_to_dict(const TransitionGraph& graph) {
  py::dict out;
  py::list nodes;
  for (const auto& node : graph.nodes) {
    py::dict n;
    n["name"] = node.name;
    n["profile"] = node.profile_index >= 0
                       ? py::object(profile_to_tuple(
                             StrategyProfile::from_index(node.profile_index)))
                       : py::object(py::none());
    n["occupancy"] = node.occupancy;
    nodes.append(n);
  }
  out["nodes"] = nodes;
  py::list edges;
  for (size_t from = 0; from < graph.nodes.size(); ++from) {
    for (size_t to = 0; to < graph.nodes.size(); ++to) {
      if (graph.counts[from][to] == 0) continue;
      py::dict e;
      e["from"] = graph.nodes[from].name;
      e["to"] = graph.nodes[to].name;
      e["count"] = graph.counts[from][to];
      e["probability"] = graph.prob[from][to];
      edges.append(e);
    }
  }
  out["edges"] = edges;
  out["samples"] = graph.samples;
  return out;
}

}  // namespace

PYBIND11_MODULE(_qgame, m) {
  m.doc() = "Iterated three-player quantum game simulator";

  py::class_<PayoffTable>(m, "PayoffTable")
      .def(py::init<>())
      .def_property_readonly(
          "payoffs",
          [](const PayoffTable& table) {
            py::list rows;
            for (size_t k = 0; k < 8; ++k) {
              rows.append(py::make_tuple(table.payoffs[k][0],
                                         table.payoffs[k][1],
                                         table.payoffs[k][2]));
            }
            return rows;
          })
      .def("__repr__", [](const PayoffTable&) {
        return std::string("<qgame.PayoffTable>");
      });

  m.def("reference_table", &reference_table,
        "The payoff table shipped with the repository.");
  m.def(
      "load_table",
      [](const std::string& path) { return load_table(path); }, py::arg("path"),
      "Parse a payoff table file (8 lines of 'bbb p1 p2 p3').");

  m.def(
      "validate_table",
      [](const PayoffTable& table) {
        py::dict out;
        const ValidationReport report = validate_table(table);
        for (const ConstraintResult& c : report.constraints) {
          py::dict entry;
          entry["passed"] = c.passed;
          entry["detail"] = c.detail;
          out[py::str(c.name.substr(0, 2))] = entry;
        }
        out["all_passed"] = report.all_passed();
        return out;
      },
      py::arg("table"), "Check constraints C1-C4 on a payoff table.");

  m.def(
      "move_unitary",
      [](const py::handle& move) {
        const SingleQubitGate gate = move_unitary(move_from_object(move));
        return py::make_tuple(py::make_tuple(gate.m[0], gate.m[1]),
                              py::make_tuple(gate.m[2], gate.m[3]));
      },
      py::arg("move"), "2x2 unitary for a move (0, 1 or 0.5).");

  m.def(
      "quantum_final_state",
      [](const py::handle& profile, int s) {
        const PureState state =
            quantum_final_state(profile_from_object(profile), s);
        std::vector<std::complex<double>> out(state.amp.begin(),
                                              state.amp.end());
        return out;
      },
      py::arg("profile"), py::arg("s"),
      "Amplitudes of J^dag (U1 x U2 x U3) J |sss>.");

  m.def(
      "classical_outcome_distribution",
      [](const py::handle& profile, int s) {
        const OutcomeDistribution d =
            classical_outcome_distribution(profile_from_object(profile), s);
        return std::vector<double>(d.begin(), d.end());
      },
      py::arg("profile"), py::arg("s"));

  m.def(
      "quantum_outcome_distribution",
      [](const py::handle& profile, int s) {
        const OutcomeDistribution d =
            quantum_outcome_distribution(profile_from_object(profile), s);
        return std::vector<double>(d.begin(), d.end());
      },
      py::arg("profile"), py::arg("s"));

  m.def(
      "expected_payoffs",
      [](const py::handle& profile, const std::string& source,
         const std::string& variant, const PayoffTable& table) {
        const PayoffTriple e =
            expected_payoffs(profile_from_object(profile),
                             source_from_string(source),
                             variant_from_string(variant), table);
        return py::make_tuple(e[0], e[1], e[2]);
      },
      py::arg("profile"), py::arg("source"), py::arg("variant"),
      py::arg("table"),
      "Expected per-player payoffs; source 'mix' averages s=0 and s=1.");

  m.def("profile_classes", []() {
    py::list out;
    for (const ProfileClass& cls : enumerate_profile_classes()) {
      py::dict entry;
      entry["representative"] = profile_to_tuple(cls.representative());
      entry["multiplicity"] = cls.multiplicity();
      py::list members;
      for (const StrategyProfile& member : cls.members()) {
        members.append(profile_to_tuple(member));
      }
      entry["members"] = members;
      out.append(entry);
    }
    return out;
  });

  m.def(
      "find_equilibria",
      [](const std::string& variant, int s, const PayoffTable& table) {
        const EquilibriumReport report =
            find_equilibria(variant_from_string(variant), s, table);
        py::dict out;
        py::list dominant;
        for (const auto& move : report.dominant_move) {
          dominant.append(move ? py::object(py::float_(move_p(*move)))
                               : py::object(py::none()));
        }
        out["dominant_moves"] = dominant;
        out["dominant_profile"] =
            report.dominant_profile
                ? py::object(profile_to_tuple(*report.dominant_profile))
                : py::object(py::none());
        py::list nash;
        for (const StrategyProfile& profile : report.nash) {
          nash.append(profile_to_tuple(profile));
        }
        out["nash"] = nash;
        return out;
      },
      py::arg("variant"), py::arg("s"), py::arg("table"));

  m.def("update_moving_average", &update_moving_average, py::arg("prev"),
        py::arg("delta"), py::arg("m"));

  m.def(
      "run",
      [](int m, const std::string& variant, const std::string& source,
         double d, int trial_period, int64_t steps, int64_t burn_in,
         uint64_t seed, const std::optional<PayoffTable>& table,
         bool collect_profiles) {
        const PayoffTable t = table ? *table : reference_table();
        const EvolutionConfig config = config_from_kwargs(
            m, variant, source, d, trial_period, steps, burn_in, seed);
        std::vector<uint8_t> series;
        RunOptions options;
        if (collect_profiles) {
          series.reserve(static_cast<size_t>(steps));
          options.profile_series = &series;
        }
        py::dict out;
        {
          py::gil_scoped_release release;
          const RunSummary summary = run(config, t, options);
          py::gil_scoped_acquire acquire;
          out = summary_to_dict(summary);
        }
        if (collect_profiles) {
          out["profile_series"] = py::array_t<uint8_t>(
              static_cast<py::ssize_t>(series.size()), series.data());
        }
        return out;
      },
      py::arg("m"), py::arg("variant") = "classical", py::arg("source") = "0",
      py::arg("d") = 3.0, py::arg("trial_period") = 0,
      py::arg("steps") = 100000, py::arg("burn_in") = 0, py::arg("seed") = 1,
      py::arg("table") = std::nullopt, py::arg("collect_profiles") = false,
      "Run the iterated game and return its summary statistics.");

  m.def(
      "attractor_transitions",
      [](py::array_t<uint8_t, py::array::c_style | py::array::forcecast> series,
         int m, double naming_threshold, int phase) {
        const py::buffer_info buf = series.request();
        if (buf.ndim != 1) {
          throw py::value_error("profile series must be one-dimensional");
        }
        const auto* data = static_cast<const uint8_t*>(buf.ptr);
        const TransitionGraph graph = attractor_transitions(
            std::span<const uint8_t>(data, static_cast<size_t>(buf.shape[0])),
            m, naming_threshold, phase);
        return graph_to_dict(graph);
      },
      py::arg("profile_series"), py::arg("m"),
      py::arg("naming_threshold") = 0.01, py::arg("phase") = 0,
      "Attractor transition graph sampled every m rounds.");

  m.def(
      "cell_seed",
      [](uint64_t master_seed, int m, const std::string& variant,
         const std::string& source) {
        return cell_seed(master_seed, m, variant_from_string(variant),
                         source_from_string(source));
      },
      py::arg("master_seed"), py::arg("m"), py::arg("variant"),
      py::arg("source"),
      "Deterministic per-cell seed used by sweeps.");

  m.attr("__version__") = "0.1.0";
}
