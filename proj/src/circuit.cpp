#include "qgame/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qgame/errors.hpp"

namespace qgame {

PureState PureState::basis(int index) {
  if (index < 0 || index > 7) {
    throw std::invalid_argument("basis index must be in 0..7, got " +
                                std::to_string(index));
  }
  PureState s;
  s.amp[static_cast<size_t>(index)] = Amplitude(1.0, 0.0);
  return s;
}

double PureState::norm_sq() const {
  double n = 0.0;
  for (const Amplitude& a : amp) n += std::norm(a);
  return n;
}

bool PureState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) < tol;
}

bool PureState::approx_equal(const PureState& other, double tol) const {
  for (size_t k = 0; k < 8; ++k) {
    if (std::abs(amp[k] - other.amp[k]) >= tol) return false;
  }
  return true;
}

bool SingleQubitGate::is_unitary(double tol) const {
  // G * G^dagger == I, checked entrywise.
  const Amplitude a = m[0], b = m[1], c = m[2], d = m[3];
  const Amplitude e00 = a * std::conj(a) + b * std::conj(b);
  const Amplitude e01 = a * std::conj(c) + b * std::conj(d);
  const Amplitude e10 = c * std::conj(a) + d * std::conj(b);
  const Amplitude e11 = c * std::conj(c) + d * std::conj(d);
  return std::abs(e00 - 1.0) < tol && std::abs(e01) < tol &&
         std::abs(e10) < tol && std::abs(e11 - 1.0) < tol;
}

SingleQubitGate identity_gate() { return {{1.0, 0.0, 0.0, 1.0}}; }

SingleQubitGate pauli_x() { return {{0.0, 1.0, 1.0, 0.0}}; }

SingleQubitGate pauli_z() { return {{1.0, 0.0, 0.0, -1.0}}; }

SingleQubitGate hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{r, r, r, -r}};
}

PureState apply_gate(const PureState& state, const SingleQubitGate& gate,
                     int qubit) {
  if (qubit < 1 || qubit > 3) {
    throw std::invalid_argument("qubit index must be in 1..3, got " +
                                std::to_string(qubit));
  }
  if (!gate.is_unitary()) {
    throw ValidationError("gate is not unitary within tolerance");
  }
  // Qubit 1 is the most significant bit of the outcome index.
  const size_t bit = static_cast<size_t>(1) << (3 - qubit);
  PureState out;
  for (size_t k = 0; k < 8; ++k) {
    const size_t k0 = k & ~bit;  // basis state with target bit cleared
    const size_t k1 = k | bit;   // basis state with target bit set
    if (k & bit) {
      out.amp[k] = gate.m[2] * state.amp[k0] + gate.m[3] * state.amp[k1];
    } else {
      out.amp[k] = gate.m[0] * state.amp[k0] + gate.m[1] * state.amp[k1];
    }
  }
  return out;
}

PureState apply_entangler(const PureState& state,
                          EntangleDirection direction) {
  const double r = 1.0 / std::sqrt(2.0);
  // J |b> = (|b> + i |~b>)/sqrt(2); the inverse flips the sign of i.
  const Amplitude phase =
      direction == EntangleDirection::forward ? Amplitude(0.0, 1.0)
                                              : Amplitude(0.0, -1.0);
  PureState out;
  for (size_t k = 0; k < 8; ++k) {
    out.amp[k] = r * (state.amp[k] + phase * state.amp[7 - k]);
  }
  return out;
}

OutcomeDistribution outcome_distribution(const PureState& state) {
  if (!state.is_normalized(kDistTolerance)) {
    throw ValidationError("state norm deviates from 1 beyond tolerance");
  }
  OutcomeDistribution dist;
  for (size_t k = 0; k < 8; ++k) dist[k] = std::norm(state.amp[k]);
  return dist;
}

int sample_outcome(const OutcomeDistribution& dist, RngStream& rng) {
  const double u = rng.next_double();
  double cumulative = 0.0;
  for (int k = 0; k < 8; ++k) {
    cumulative += dist[static_cast<size_t>(k)];
    if (u < cumulative) return k;
  }
  // Guard against cumulative rounding slightly below 1.
  for (int k = 7; k >= 0; --k) {
    if (dist[static_cast<size_t>(k)] > 0.0) return k;
  }
  return 7;
}

}  // namespace qgame
