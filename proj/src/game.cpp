#include "qgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qgame/errors.hpp"

namespace qgame {

namespace {

// Strictness margin for payoff comparisons. Expected payoffs are short sums
// of table entries scaled by dyadic probabilities, so genuine ties sit well
// below this and genuine gaps well above it.
constexpr double kPayoffEps = 1e-9;

constexpr double kCqeTolerance = 1e-9;

}  // namespace

double move_p(Move m) {
  switch (m) {
    case Move::flip:
      return 0.0;
    case Move::stay:
      return 1.0;
    case Move::coin:
      return 0.5;
  }
  throw std::invalid_argument("invalid move");
}

std::string_view move_token(Move m) {
  switch (m) {
    case Move::flip:
      return "0";
    case Move::stay:
      return "1";
    case Move::coin:
      return "1/2";
  }
  throw std::invalid_argument("invalid move");
}

std::optional<Move> parse_move(std::string_view token) {
  if (token == "0") return Move::flip;
  if (token == "1") return Move::stay;
  if (token == "1/2" || token == "0.5") return Move::coin;
  return std::nullopt;
}

SingleQubitGate move_unitary(Move m) {
  switch (m) {
    case Move::flip:
      return pauli_x();
    case Move::stay:
      return identity_gate();
    case Move::coin:
      return hadamard();
  }
  throw std::invalid_argument("invalid move");
}

StrategyProfile StrategyProfile::from_index(int index) {
  if (index < 0 || index >= kProfileCount) {
    throw std::invalid_argument("profile index must be in 0..26, got " +
                                std::to_string(index));
  }
  return {{static_cast<Move>(index / 9), static_cast<Move>((index / 3) % 3),
           static_cast<Move>(index % 3)}};
}

std::string StrategyProfile::str() const {
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (i > 0) out += '-';
    out += move_token(moves[static_cast<size_t>(i)]);
  }
  return out;
}

std::optional<StrategyProfile> StrategyProfile::parse(std::string_view text) {
  std::array<Move, 3> moves{};
  size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    size_t next = i < 2 ? text.find('-', pos) : text.size();
    if (next == std::string_view::npos) return std::nullopt;
    auto move = parse_move(text.substr(pos, next - pos));
    if (!move) return std::nullopt;
    moves[static_cast<size_t>(i)] = *move;
    pos = next + 1;
  }
  return StrategyProfile{moves};
}

int ProfileClass::multiplicity() const {
  return static_cast<int>(members().size());
}

std::vector<StrategyProfile> ProfileClass::members() const {
  std::vector<StrategyProfile> out;
  std::array<Move, 3> perm = sorted_moves;
  std::sort(perm.begin(), perm.end());
  do {
    out.push_back(StrategyProfile{perm});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

bool ProfileClass::contains(const StrategyProfile& profile) const {
  std::array<Move, 3> sorted = profile.moves;
  std::sort(sorted.begin(), sorted.end());
  return sorted == sorted_moves;
}

std::vector<ProfileClass> enumerate_profile_classes() {
  std::vector<ProfileClass> classes;
  for (int a = 0; a < kMoveCount; ++a) {
    for (int b = a; b < kMoveCount; ++b) {
      for (int c = b; c < kMoveCount; ++c) {
        classes.push_back(ProfileClass{{static_cast<Move>(a),
                                        static_cast<Move>(b),
                                        static_cast<Move>(c)}});
      }
    }
  }
  return classes;
}

std::string_view variant_token(Variant v) {
  return v == Variant::classical ? "classical" : "quantum";
}

std::optional<Variant> parse_variant(std::string_view token) {
  if (token == "classical") return Variant::classical;
  if (token == "quantum") return Variant::quantum;
  return std::nullopt;
}

std::string_view SourceSpec::token() const {
  switch (mode) {
    case SourceMode::fixed0:
      return "0";
    case SourceMode::fixed1:
      return "1";
    case SourceMode::mix50:
      return "mix";
  }
  throw std::invalid_argument("invalid source mode");
}

std::optional<SourceSpec> SourceSpec::parse(std::string_view token) {
  if (token == "0") return SourceSpec{SourceMode::fixed0};
  if (token == "1") return SourceSpec{SourceMode::fixed1};
  if (token == "mix" || token == "mix50") return SourceSpec{SourceMode::mix50};
  return std::nullopt;
}

double PayoffTable::min_payoff() const {
  double v = payoffs[0][0];
  for (const auto& triple : payoffs)
    for (double p : triple) v = std::min(v, p);
  return v;
}

double PayoffTable::max_payoff() const {
  double v = payoffs[0][0];
  for (const auto& triple : payoffs)
    for (double p : triple) v = std::max(v, p);
  return v;
}

PayoffTable reference_table() {
  // Same numbers as data/reference.payoff. A bit reading 1 earns its player
  // 2, 9 or 2 points when 0, 1 or 2 of the other bits read 1; a bit reading
  // 0 earns 1 point next to two 1s and nothing otherwise.
  PayoffTable t;
  t.payoffs = {{
      {0, 0, 0},  // 000   (payoff fields are ordered player 1, 2, 3)
      {0, 0, 2},  // 001
      {0, 2, 0},  // 010
      {1, 9, 9},  // 011
      {2, 0, 0},  // 100
      {9, 1, 9},  // 101
      {9, 9, 1},  // 110
      {2, 2, 2},  // 111
  }};
  return t;
}

PureState quantum_final_state(const StrategyProfile& profile, int s) {
  if (s != 0 && s != 1) {
    throw std::invalid_argument("source bit must be 0 or 1");
  }
  PureState state = PureState::basis(s == 0 ? 0 : 7);
  state = apply_entangler(state, EntangleDirection::forward);
  for (int player = 0; player < 3; ++player) {
    state = apply_gate(state, move_unitary(profile.moves[static_cast<size_t>(player)]),
                       player + 1);
  }
  return apply_entangler(state, EntangleDirection::inverse);
}

OutcomeDistribution classical_outcome_distribution(
    const StrategyProfile& profile, int s) {
  if (s != 0 && s != 1) {
    throw std::invalid_argument("source bit must be 0 or 1");
  }
  // Player i's bit equals s with probability p_i, independently.
  std::array<std::array<double, 2>, 3> bit_prob{};
  for (int player = 0; player < 3; ++player) {
    const double p = move_p(profile.moves[static_cast<size_t>(player)]);
    bit_prob[static_cast<size_t>(player)][static_cast<size_t>(s)] = p;
    bit_prob[static_cast<size_t>(player)][static_cast<size_t>(1 - s)] = 1.0 - p;
  }
  OutcomeDistribution dist;
  for (size_t k = 0; k < 8; ++k) {
    dist[k] = bit_prob[0][(k >> 2) & 1] * bit_prob[1][(k >> 1) & 1] *
              bit_prob[2][k & 1];
  }
  return dist;
}

OutcomeDistribution quantum_outcome_distribution(const StrategyProfile& profile,
                                                 int s) {
  return outcome_distribution(quantum_final_state(profile, s));
}

OutcomeDistribution unentangled_outcome_distribution(
    const StrategyProfile& profile, int s) {
  if (s != 0 && s != 1) {
    throw std::invalid_argument("source bit must be 0 or 1");
  }
  PureState state = PureState::basis(s == 0 ? 0 : 7);
  for (int player = 0; player < 3; ++player) {
    state = apply_gate(state, move_unitary(profile.moves[static_cast<size_t>(player)]),
                       player + 1);
  }
  return outcome_distribution(state);
}

OutcomeDistribution variant_outcome_distribution(const StrategyProfile& profile,
                                                 int s, Variant variant) {
  return variant == Variant::classical
             ? classical_outcome_distribution(profile, s)
             : quantum_outcome_distribution(profile, s);
}

PayoffTriple expected_payoffs(const StrategyProfile& profile, int s,
                              Variant variant, const PayoffTable& table) {
  const OutcomeDistribution dist =
      variant_outcome_distribution(profile, s, variant);
  PayoffTriple out = {0.0, 0.0, 0.0};
  for (size_t k = 0; k < 8; ++k) {
    for (size_t i = 0; i < 3; ++i) out[i] += dist[k] * table.payoffs[k][i];
  }
  return out;
}

PayoffTriple expected_payoffs(const StrategyProfile& profile,
                              const SourceSpec& source, Variant variant,
                              const PayoffTable& table) {
  if (source.is_fixed()) {
    return expected_payoffs(profile, source.fixed_bit(), variant, table);
  }
  const PayoffTriple e0 = expected_payoffs(profile, 0, variant, table);
  const PayoffTriple e1 = expected_payoffs(profile, 1, variant, table);
  return {(e0[0] + e1[0]) / 2.0, (e0[1] + e1[1]) / 2.0, (e0[2] + e1[2]) / 2.0};
}

bool ValidationReport::all_passed() const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [](const ConstraintResult& c) { return c.passed; });
}

std::string ValidationReport::str() const {
  std::ostringstream out;
  for (const ConstraintResult& c : constraints) {
    out << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.detail
        << ")\n";
  }
  return out.str();
}

namespace {

std::string payoff_triple_str(const PayoffTriple& t) {
  std::ostringstream out;
  out << "(" << t[0] << ", " << t[1] << ", " << t[2] << ")";
  return out.str();
}

// C1: on input 0 in the classical game, flipping is strictly better for
// every player against every combination of the other players' bits.
ConstraintResult check_c1(const PayoffTable& table) {
  for (int player = 0; player < 3; ++player) {
    const size_t own_bit = static_cast<size_t>(1) << (2 - player);
    for (size_t others = 0; others < 8; ++others) {
      if (others & own_bit) continue;  // enumerate others' bits only
      const size_t keep = others;           // own bit 0 (input kept)
      const size_t flip = others | own_bit;  // own bit 1 (input flipped)
      const double gain = table.payoffs[flip][static_cast<size_t>(player)] -
                          table.payoffs[keep][static_cast<size_t>(player)];
      if (!(gain > 0.0)) {
        std::ostringstream detail;
        detail << "player " << player + 1 << " does not strictly gain by "
               << "flipping against others' bits pattern " << keep
               << " (gain " << gain << ")";
        return {"C1 dominance", false, detail.str()};
      }
    }
  }
  return {"C1 dominance", true, "flip strictly dominates for all players"};
}

ConstraintResult check_c2(const PayoffTable& table) {
  const PayoffTriple& p = table.payoffs[7];
  if (p[0] == 2.0 && p[1] == 2.0 && p[2] == 2.0) {
    return {"C2 DSE value", true, "outcome 111 pays (2, 2, 2)"};
  }
  return {"C2 DSE value", false,
          "outcome 111 pays " + payoff_triple_str(p) + ", expected (2, 2, 2)"};
}

// C3: flipping with probability 0.8 on input 0 gives each player an
// expected payoff strictly above 2.
ConstraintResult check_c3(const PayoffTable& table) {
  constexpr double q = 0.8;  // probability that a bit reads 1
  PayoffTriple expected = {0.0, 0.0, 0.0};
  for (size_t k = 0; k < 8; ++k) {
    double prob = 1.0;
    for (int bit = 0; bit < 3; ++bit) {
      prob *= (k >> (2 - bit)) & 1 ? q : 1.0 - q;
    }
    for (size_t i = 0; i < 3; ++i) expected[i] += prob * table.payoffs[k][i];
  }
  for (size_t i = 0; i < 3; ++i) {
    if (!(expected[i] > 2.0)) {
      return {"C3 cooperation", false,
              "80% flip gives player " + std::to_string(i + 1) +
                  " expected payoff " + std::to_string(expected[i])};
    }
  }
  return {"C3 cooperation", true,
          "80% flip pays " + payoff_triple_str(expected) + " > 2 each"};
}

// C4: the quantum game at s=0 has a Nash profile whose expected payoffs are
// {5, 9, 5} as a multiset, total 19. Identified by search, not by label.
ConstraintResult check_c4(const PayoffTable& table) {
  const EquilibriumReport eq = find_equilibria(Variant::quantum, 0, table);
  for (const StrategyProfile& profile : eq.nash) {
    PayoffTriple e = expected_payoffs(profile, 0, Variant::quantum, table);
    PayoffTriple sorted = e;
    std::sort(sorted.begin(), sorted.end());
    const double total = e[0] + e[1] + e[2];
    if (std::abs(sorted[0] - 5.0) < kCqeTolerance &&
        std::abs(sorted[1] - 5.0) < kCqeTolerance &&
        std::abs(sorted[2] - 9.0) < kCqeTolerance &&
        std::abs(total - 19.0) < kCqeTolerance) {
      return {"C4 CQE value", true,
              "quantum Nash profile " + profile.str() + " pays " +
                  payoff_triple_str(e)};
    }
  }
  return {"C4 CQE value", false,
          "no quantum Nash profile at s=0 pays {5, 9, 5} (found " +
              std::to_string(eq.nash.size()) + " Nash profiles)"};
}

}  // namespace

ValidationReport validate_table(const PayoffTable& table) {
  return ValidationReport{
      {check_c1(table), check_c2(table), check_c3(table), check_c4(table)}};
}

std::string EquilibriumReport::str() const {
  std::ostringstream out;
  out << "variant=" << variant_token(variant) << " source=" << s << "\n";
  if (variant == Variant::classical) {
    for (int player = 0; player < 3; ++player) {
      out << "player " << player + 1 << " dominant move: ";
      const auto& m = dominant_move[static_cast<size_t>(player)];
      out << (m ? move_token(*m) : "none") << "\n";
    }
    out << "dominant strategy equilibrium: "
        << (dominant_profile ? dominant_profile->str() : "none") << "\n";
  }
  out << "Nash equilibria (" << nash.size() << "):\n";
  for (const StrategyProfile& p : nash) {
    out << "  " << p.str() << "\n";
  }
  return out.str();
}

EquilibriumReport find_equilibria(Variant variant, int s,
                                  const PayoffTable& table) {
  EquilibriumReport report;
  report.variant = variant;
  report.s = s;

  // Cache expected payoffs for the 27 profiles.
  std::array<PayoffTriple, kProfileCount> payoff;
  for (int idx = 0; idx < kProfileCount; ++idx) {
    payoff[static_cast<size_t>(idx)] =
        expected_payoffs(StrategyProfile::from_index(idx), s, variant, table);
  }

  // Nash: no player gains strictly by a unilateral move change.
  for (int idx = 0; idx < kProfileCount; ++idx) {
    const StrategyProfile profile = StrategyProfile::from_index(idx);
    bool nash = true;
    for (int player = 0; player < 3 && nash; ++player) {
      const double here = payoff[static_cast<size_t>(idx)][static_cast<size_t>(player)];
      for (Move alt : kAllMoves) {
        if (alt == profile.moves[static_cast<size_t>(player)]) continue;
        StrategyProfile deviated = profile;
        deviated.moves[static_cast<size_t>(player)] = alt;
        const double there =
            payoff[static_cast<size_t>(deviated.index())][static_cast<size_t>(player)];
        if (there > here + kPayoffEps) {
          nash = false;
          break;
        }
      }
    }
    if (nash) report.nash.push_back(profile);
  }

  // Dominant strategies are a classical-game notion here.
  if (variant == Variant::classical) {
    for (int player = 0; player < 3; ++player) {
      for (Move candidate : kAllMoves) {
        bool dominant = true;
        // Against all 9 opposing move pairs, candidate strictly beats both
        // alternatives.
        for (int o1 = 0; o1 < kMoveCount && dominant; ++o1) {
          for (int o2 = 0; o2 < kMoveCount && dominant; ++o2) {
            StrategyProfile base{};
            int slot = 0;
            for (int q = 0; q < 3; ++q) {
              if (q == player) continue;
              base.moves[static_cast<size_t>(q)] =
                  static_cast<Move>(slot++ == 0 ? o1 : o2);
            }
            base.moves[static_cast<size_t>(player)] = candidate;
            const double with_candidate =
                payoff[static_cast<size_t>(base.index())][static_cast<size_t>(player)];
            for (Move alt : kAllMoves) {
              if (alt == candidate) continue;
              StrategyProfile other = base;
              other.moves[static_cast<size_t>(player)] = alt;
              const double with_alt =
                  payoff[static_cast<size_t>(other.index())][static_cast<size_t>(player)];
              if (!(with_candidate > with_alt + kPayoffEps)) {
                dominant = false;
                break;
              }
            }
          }
        }
        if (dominant) {
          report.dominant_move[static_cast<size_t>(player)] = candidate;
          break;
        }
      }
    }
    if (report.dominant_move[0] && report.dominant_move[1] &&
        report.dominant_move[2]) {
      report.dominant_profile = StrategyProfile{
          {*report.dominant_move[0], *report.dominant_move[1],
           *report.dominant_move[2]}};
    }
  }
  return report;
}

DistributionCache::DistributionCache() {
  for (int s = 0; s < 2; ++s) {
    for (int idx = 0; idx < kProfileCount; ++idx) {
      const StrategyProfile profile = StrategyProfile::from_index(idx);
      table_[static_cast<size_t>(Variant::classical)][static_cast<size_t>(s)]
            [static_cast<size_t>(idx)] =
                classical_outcome_distribution(profile, s);
      table_[static_cast<size_t>(Variant::quantum)][static_cast<size_t>(s)]
            [static_cast<size_t>(idx)] = quantum_outcome_distribution(profile, s);
    }
  }
}

}  // namespace qgame
