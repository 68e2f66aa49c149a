#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgame/circuit.hpp"

namespace qgame {

/// A player's move, identified by p = probability of leaving the input
/// qubit unflipped. The quantum counterparts are the unitaries the move
/// labels map to: p=1 -> I, p=0 -> sigma_x, p=1/2 -> (sigma_x+sigma_z)/sqrt2.
enum class Move : uint8_t {
  flip = 0,  // p = 0
  stay = 1,  // p = 1
  coin = 2,  // p = 1/2
};

inline constexpr int kMoveCount = 3;
inline constexpr std::array<Move, 3> kAllMoves = {Move::flip, Move::stay,
                                                  Move::coin};

double move_p(Move m);
std::string_view move_token(Move m);  // "0", "1", "1/2"
std::optional<Move> parse_move(std::string_view token);
SingleQubitGate move_unitary(Move m);

/// Ordered triple of moves, one per player.
struct StrategyProfile {
  std::array<Move, 3> moves;

  /// Dense index in 0..26: player 1 is the most significant trit.
  int index() const {
    return static_cast<int>(moves[0]) * 9 + static_cast<int>(moves[1]) * 3 +
           static_cast<int>(moves[2]);
  }
  static StrategyProfile from_index(int index);

  /// Render as "p1-p2-p3", e.g. "0-1-1/2".
  std::string str() const;
  static std::optional<StrategyProfile> parse(std::string_view text);

  bool operator==(const StrategyProfile&) const = default;
};

inline constexpr int kProfileCount = 27;

/// Equivalence class of profiles under player relabeling: a multiset of
/// three moves. `multiplicity` is the number of member profiles (1, 3 or 6).
struct ProfileClass {
  std::array<Move, 3> sorted_moves;  // non-decreasing by move enum value

  StrategyProfile representative() const { return {sorted_moves}; }
  int multiplicity() const;
  std::vector<StrategyProfile> members() const;
  bool contains(const StrategyProfile& profile) const;

  bool operator==(const ProfileClass&) const = default;
};

/// The 10 classes over {0,1,1/2}^3 in a fixed deterministic order.
std::vector<ProfileClass> enumerate_profile_classes();

enum class Variant : uint8_t { classical = 0, quantum = 1 };

std::string_view variant_token(Variant v);
std::optional<Variant> parse_variant(std::string_view token);

enum class SourceMode : uint8_t { fixed0 = 0, fixed1 = 1, mix50 = 2 };

/// Orientation of the external qubit/bit source. fixed0 and fixed1 emit the
/// same state every round; mix50 draws a fair, independent bit per round.
struct SourceSpec {
  SourceMode mode = SourceMode::fixed0;

  bool is_fixed() const { return mode != SourceMode::mix50; }
  int fixed_bit() const { return mode == SourceMode::fixed1 ? 1 : 0; }
  int draw(RngStream& rng) const {
    return is_fixed() ? fixed_bit() : static_cast<int>(rng.next_coin());
  }

  std::string_view token() const;  // "0", "1", "mix"
  static std::optional<SourceSpec> parse(std::string_view token);

  bool operator==(const SourceSpec&) const = default;
};

using PayoffTriple = std::array<double, 3>;

/// Points per round for each player, for each of the 8 measured outcomes.
struct PayoffTable {
  std::array<PayoffTriple, 8> payoffs{};

  double min_payoff() const;
  double max_payoff() const;
};

/// The payoff table shipped with the repository (data/reference.payoff),
/// as a built-in constant for tests and bindings.
PayoffTable reference_table();

/// Final state of the entangled protocol: J^dag (U1 x U2 x U3) J |sss>.
PureState quantum_final_state(const StrategyProfile& profile, int s);

/// Product distribution of independent bit flips: player i's bit equals s
/// with probability p_i.
OutcomeDistribution classical_outcome_distribution(
    const StrategyProfile& profile, int s);

/// Measurement distribution of the entangled protocol.
OutcomeDistribution quantum_outcome_distribution(const StrategyProfile& profile,
                                                 int s);

/// Measurement distribution with both J gates removed: moves applied
/// directly to |sss>. Equals the classical distribution for every profile.
OutcomeDistribution unentangled_outcome_distribution(
    const StrategyProfile& profile, int s);

OutcomeDistribution variant_outcome_distribution(const StrategyProfile& profile,
                                                 int s, Variant variant);

/// Expected per-player payoffs for a fixed source bit.
PayoffTriple expected_payoffs(const StrategyProfile& profile, int s,
                              Variant variant, const PayoffTable& table);

/// Expected per-player payoffs under a SourceSpec; mix50 is the unweighted
/// mean of the s=0 and s=1 results.
PayoffTriple expected_payoffs(const StrategyProfile& profile,
                              const SourceSpec& source, Variant variant,
                              const PayoffTable& table);

/// Result of checking one payoff-table constraint.
struct ConstraintResult {
  std::string name;
  bool passed = false;
  std::string detail;  // witness on failure, short confirmation on success
};

struct ValidationReport {
  std::array<ConstraintResult, 4> constraints;  // C1..C4

  bool all_passed() const;
  std::string str() const;
};

/// Checks the four textual constraints on a payoff table:
///   C1  flipping strictly dominates for every player on input 0 (classical)
///   C2  outcome 111 pays exactly (2,2,2)
///   C3  all-flip-with-probability-0.8 beats 2 points per player on input 0
///   C4  the quantum game at s=0 has a Nash profile paying {5,9,5}, total 19
ValidationReport validate_table(const PayoffTable& table);

struct EquilibriumReport {
  Variant variant;
  int s = 0;
  /// Strictly dominant move per player, if one exists (classical only).
  std::array<std::optional<Move>, 3> dominant_move;
  std::optional<StrategyProfile> dominant_profile;
  /// All profiles with no strictly improving unilateral deviation.
  std::vector<StrategyProfile> nash;

  std::string str() const;
};

/// Exhaustive equilibrium search over the 27 profiles.
EquilibriumReport find_equilibria(Variant variant, int s,
                                  const PayoffTable& table);

/// Outcome distributions for all 27 profiles x s in {0,1} x both variants,
/// built once by pure enumeration. The evolutionary loop reads from this.
class DistributionCache {
 public:
  DistributionCache();

  const OutcomeDistribution& get(Variant variant, int s,
                                 int profile_index) const {
    return table_[static_cast<size_t>(variant)][static_cast<size_t>(s)]
                 [static_cast<size_t>(profile_index)];
  }

 private:
  std::array<std::array<std::array<OutcomeDistribution, kProfileCount>, 2>, 2>
      table_;
};

}  // namespace qgame
