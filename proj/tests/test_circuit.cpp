#include <doctest.h>

#include <array>
#include <cmath>

#include "qgame/circuit.hpp"
#include "qgame/errors.hpp"
#include "test_util.hpp"

using namespace qgame;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("pauli_x on qubit 1 maps |000> to |100>") {
  const PureState out = apply_gate(PureState::basis(0), pauli_x(), 1);
  CHECK(out.approx_equal(PureState::basis(4)));
}

TEST_CASE("identity leaves any state unchanged") {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState s = test::random_state(rng);
    for (int qubit = 1; qubit <= 3; ++qubit) {
      CHECK(apply_gate(s, identity_gate(), qubit).approx_equal(s));
    }
  }
}

TEST_CASE("hadamard on qubit 1 of |000> gives (|000>+|100>)/sqrt2") {
  const PureState out = apply_gate(PureState::basis(0), hadamard(), 1);
  PureState want;
  want.amp[0] = kInvSqrt2;
  want.amp[4] = kInvSqrt2;
  CHECK(out.approx_equal(want));
}

TEST_CASE("hadamard is an involution") {
  RngStream rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState s = test::random_state(rng);
    for (int qubit = 1; qubit <= 3; ++qubit) {
      const PureState twice =
          apply_gate(apply_gate(s, hadamard(), qubit), hadamard(), qubit);
      CHECK(twice.approx_equal(s));
    }
  }
}

TEST_CASE("gate application preserves the norm") {
  RngStream rng(13);
  const std::array<SingleQubitGate, 4> gates = {identity_gate(), pauli_x(),
                                                pauli_z(), hadamard()};
  for (int trial = 0; trial < 30; ++trial) {
    const PureState s = test::random_state(rng);
    for (const auto& gate : gates) {
      for (int qubit = 1; qubit <= 3; ++qubit) {
        CHECK(std::abs(apply_gate(s, gate, qubit).norm_sq() - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("gate validation rejects bad input") {
  SingleQubitGate not_unitary{{1.0, 0.0, 0.0, 2.0}};
  CHECK_THROWS_AS(apply_gate(PureState::basis(0), not_unitary, 1),
                  ValidationError);
  CHECK_THROWS_AS(apply_gate(PureState::basis(0), pauli_x(), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_gate(PureState::basis(0), pauli_x(), 4),
                  std::invalid_argument);
}

TEST_CASE("entangler maps |000> to (|000>+i|111>)/sqrt2") {
  const PureState out =
      apply_entangler(PureState::basis(0), EntangleDirection::forward);
  PureState want;
  want.amp[0] = kInvSqrt2;
  want.amp[7] = Amplitude(0.0, kInvSqrt2);
  CHECK(out.approx_equal(want));
}

TEST_CASE("entangler maps |111> to (|111>+i|000>)/sqrt2") {
  const PureState out =
      apply_entangler(PureState::basis(7), EntangleDirection::forward);
  PureState want;
  want.amp[7] = kInvSqrt2;
  want.amp[0] = Amplitude(0.0, kInvSqrt2);
  CHECK(out.approx_equal(want));
}

TEST_CASE("entangler forward then inverse is the identity") {
  RngStream rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const PureState s = test::random_state(rng);
    const PureState roundtrip = apply_entangler(
        apply_entangler(s, EntangleDirection::forward),
        EntangleDirection::inverse);
    CHECK(roundtrip.approx_equal(s));
    CHECK(std::abs(
              apply_entangler(s, EntangleDirection::forward).norm_sq() - 1.0) <
          1e-12);
  }
}

TEST_CASE("outcome distribution of basis and entangled states") {
  const OutcomeDistribution point = outcome_distribution(PureState::basis(0));
  CHECK(point[0] == 1.0);
  for (size_t k = 1; k < 8; ++k) CHECK(point[k] == 0.0);

  const OutcomeDistribution ghz = outcome_distribution(
      apply_entangler(PureState::basis(0), EntangleDirection::forward));
  CHECK(ghz[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ghz[7] == doctest::Approx(0.5).epsilon(1e-12));
  for (size_t k = 1; k < 7; ++k) CHECK(ghz[k] == doctest::Approx(0.0));

  PureState uniform;
  for (auto& a : uniform.amp) a = 1.0 / std::sqrt(8.0);
  for (double p : outcome_distribution(uniform)) {
    CHECK(p == doctest::Approx(0.125).epsilon(1e-12));
  }
}

TEST_CASE("outcome distribution sums to one on random states") {
  RngStream rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const OutcomeDistribution dist =
        outcome_distribution(test::random_state(rng));
    double total = 0.0;
    for (double p : dist) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("outcome distribution rejects unnormalized states") {
  PureState s;
  s.amp[0] = 0.5;
  CHECK_THROWS_AS(outcome_distribution(s), ValidationError);
}

TEST_CASE("sampling a point mass always returns its outcome") {
  OutcomeDistribution dist{};
  dist[3] = 1.0;
  RngStream rng(16);
  for (int trial = 0; trial < 1000; ++trial) {
    CHECK(sample_outcome(dist, rng) == 3);
  }
}

TEST_CASE("sampling the GHZ distribution passes chi-square at 0.001") {
  const OutcomeDistribution dist = outcome_distribution(
      apply_entangler(PureState::basis(0), EntangleDirection::forward));
  RngStream rng(17);
  std::array<int64_t, 8> counts{};
  const int64_t draws = 100000;
  for (int64_t i = 0; i < draws; ++i) {
    ++counts[static_cast<size_t>(sample_outcome(dist, rng))];
  }
  int degrees_of_freedom = 0;
  const double statistic =
      test::chi_square(counts, dist, draws, &degrees_of_freedom);
  CHECK(degrees_of_freedom == 1);
  CHECK(statistic < test::chi_square_critical_001(degrees_of_freedom));
  CHECK(counts[1] == 0);  // zero-probability outcomes never appear
}

TEST_CASE("identical seeds replay identical draw sequences") {
  OutcomeDistribution dist{};
  dist.fill(0.125);
  RngStream a(987654321), b(987654321);
  for (int trial = 0; trial < 10000; ++trial) {
    CHECK(sample_outcome(dist, a) == sample_outcome(dist, b));
  }
}

TEST_CASE("sampling frequencies converge over a million draws") {
  OutcomeDistribution dist = {0.05, 0.2, 0.0, 0.3, 0.125, 0.125, 0.1, 0.1};
  RngStream rng(18);
  std::array<int64_t, 8> counts{};
  const int64_t draws = 1000000;
  for (int64_t i = 0; i < draws; ++i) {
    ++counts[static_cast<size_t>(sample_outcome(dist, rng))];
  }
  for (size_t k = 0; k < 8; ++k) {
    const double freq =
        static_cast<double>(counts[k]) / static_cast<double>(draws);
    CHECK(std::abs(freq - dist[k]) < 5e-3);
  }
}
