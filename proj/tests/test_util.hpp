#pragma once

#include <cmath>

#include "qgame/circuit.hpp"
#include "qgame/rng.hpp"

namespace qgame::test {

/// Random normalized 3-qubit state.
inline PureState random_state(RngStream& rng) {
  PureState s;
  double norm = 0.0;
  for (auto& a : s.amp) {
    a = Amplitude(rng.next_double() * 2.0 - 1.0, rng.next_double() * 2.0 - 1.0);
    norm += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : s.amp) a *= scale;
  return s;
}

/// Pearson chi-square statistic of `counts` against `expected` probabilities;
/// zero-probability bins must be empty and are excluded from the statistic.
/// Returns the statistic and writes the degrees of freedom.
inline double chi_square(const std::array<int64_t, 8>& counts,
                         const OutcomeDistribution& expected, int64_t draws,
                         int* degrees_of_freedom) {
  double statistic = 0.0;
  int bins = 0;
  for (size_t k = 0; k < 8; ++k) {
    if (expected[k] == 0.0) continue;
    ++bins;
    const double want = expected[k] * static_cast<double>(draws);
    const double diff = static_cast<double>(counts[k]) - want;
    statistic += diff * diff / want;
  }
  *degrees_of_freedom = bins - 1;
  return statistic;
}

/// Upper critical values of the chi-square distribution at alpha = 0.001.
inline double chi_square_critical_001(int degrees_of_freedom) {
  constexpr double critical[] = {0.0,    10.828, 13.816, 16.266,
                                 18.467, 20.515, 22.458, 24.322};
  return critical[degrees_of_freedom];
}

}  // namespace qgame::test
