#pragma once

#include <array>
#include <complex>

#include "qgame/rng.hpp"

namespace qgame {

using Amplitude = std::complex<double>;

/// Tolerance for norm / unitarity checks on the 3-qubit register.
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kDistTolerance = 1e-10;

/// Probabilities over the 8 measurement outcomes 000..111.
/// Player i owns qubit i; player 1's bit is the most significant.
using OutcomeDistribution = std::array<double, 8>;

/// Pure state of the three-qubit register: 8 complex amplitudes indexed by
/// basis state, same bit convention as OutcomeDistribution.
struct PureState {
  std::array<Amplitude, 8> amp{};

  static PureState basis(int index);

  double norm_sq() const;
  bool is_normalized(double tol = kNormTolerance) const;

  bool approx_equal(const PureState& other, double tol = kNormTolerance) const;
};

/// 2x2 complex matrix, row-major: {m00, m01, m10, m11}.
struct SingleQubitGate {
  std::array<Amplitude, 4> m{};

  bool is_unitary(double tol = kNormTolerance) const;
};

SingleQubitGate identity_gate();
SingleQubitGate pauli_x();
SingleQubitGate pauli_z();
/// (sigma_x + sigma_z)/sqrt(2) -- the Hadamard matrix.
SingleQubitGate hadamard();

/// Applies `gate` to the given qubit (1..3, qubit 1 = most significant bit).
/// Throws ValidationError if the gate is not unitary within tolerance and
/// std::invalid_argument if the qubit index is out of range.
PureState apply_gate(const PureState& state, const SingleQubitGate& gate,
                     int qubit);

enum class EntangleDirection { forward, inverse };

/// The entangling gate J = (I^(x)3 + i X^(x)3)/sqrt(2), or its inverse.
/// J maps each basis state |b> to (|b> + i|~b>)/sqrt(2) with ~b the bitwise
/// complement, so it is applied pairwise without an explicit 8x8 matrix.
PureState apply_entangler(const PureState& state, EntangleDirection direction);

/// Measurement probabilities of `state`. Throws ValidationError if the state
/// norm deviates from 1 beyond tolerance.
OutcomeDistribution outcome_distribution(const PureState& state);

/// Draws one outcome index 0..7 from `dist`, consuming one double from the
/// stream.
int sample_outcome(const OutcomeDistribution& dist, RngStream& rng);

}  // namespace qgame
