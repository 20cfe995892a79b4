// Copyright 2026 The twirl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "twirl/twirl.hpp"

using namespace twirl;
using twirl::testing::letter_matrix;
using twirl::testing::max_abs_diff;

TEST(HaarTwirlMap, IdentityArgumentsPassThrough) {
  Rng rng(31);
  DenseMatrix x = random_matrix(4, rng);
  DenseMatrix id = DenseMatrix::Identity(4, 4);
  EXPECT_MATRIX_NEAR(haar_twirl_map(id, id, x), x, 1e-14);
}

TEST(HaarTwirlMap, IdentityInputCollapsesToTrace) {
  Rng rng(32);
  DenseMatrix a = random_matrix(4, rng), b = random_matrix(4, rng);
  DenseMatrix id = DenseMatrix::Identity(4, 4);
  DenseMatrix expected = (a * b).trace() / 4.0 * id;
  EXPECT_MATRIX_NEAR(haar_twirl_map(a, b, id), expected, 1e-14);
}

TEST(HaarTwirlMap, PauliArgumentsSingleQubit) {
  Rng rng(33);
  DenseMatrix x = random_matrix(2, rng);
  DenseMatrix id = DenseMatrix::Identity(2, 2);
  for (char letter : {'X', 'Y', 'Z'}) {
    DenseMatrix p = letter_matrix(letter);
    DenseMatrix traceless = x - x.trace() / 2.0 * id;
    DenseMatrix expected = x.trace() / 2.0 * id - traceless / 3.0;
    EXPECT_MATRIX_NEAR(haar_twirl_map(p, p, x), expected, 1e-14);
  }
}

TEST(HaarTwirlMap, UnitalityAndLinearity) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix a = random_matrix(4, rng), b = random_matrix(4, rng);
    DenseMatrix x = random_matrix(4, rng), y = random_matrix(4, rng);
    Complex expected_trace = (a * b).trace() * x.trace() / 4.0;
    EXPECT_NEAR(std::abs(haar_twirl_map(a, b, x).trace() - expected_trace), 0.0, 1e-10);

    Complex c1(rng.gauss(), rng.gauss()), c2(rng.gauss(), rng.gauss());
    DenseMatrix lhs = haar_twirl_map(a, b, c1 * x + c2 * y);
    DenseMatrix rhs = c1 * haar_twirl_map(a, b, x) + c2 * haar_twirl_map(a, b, y);
    EXPECT_MATRIX_NEAR(lhs, rhs, 1e-12);

    // Linearity in A as well.
    DenseMatrix a2 = random_matrix(4, rng);
    DenseMatrix lhs_a = haar_twirl_map(c1 * a + c2 * a2, b, x);
    DenseMatrix rhs_a = c1 * haar_twirl_map(a, b, x) + c2 * haar_twirl_map(a2, b, x);
    EXPECT_MATRIX_NEAR(lhs_a, rhs_a, 1e-12);
  }
}

TEST(HaarTwirlMap, RejectsScalars) {
  DenseMatrix one = DenseMatrix::Identity(1, 1);
  EXPECT_THROW(haar_twirl_map(one, one, one), std::domain_error);
}

TEST(EnsembleTwirlMap, SingletonIdentity) {
  Rng rng(35);
  DenseMatrix a = random_matrix(4, rng), b = random_matrix(4, rng), x = random_matrix(4, rng);
  std::vector<DenseMatrix> ens{DenseMatrix::Identity(4, 4)};
  EXPECT_MATRIX_NEAR(ensemble_twirl_map(ens, a, b, x), a * x * b, 1e-14);
}

TEST(EnsembleTwirlMap, TwoTermExplicitSum) {
  Rng rng(36);
  DenseMatrix x = random_matrix(2, rng);
  DenseMatrix z = letter_matrix('Z');
  std::vector<DenseMatrix> ens{DenseMatrix::Identity(2, 2), letter_matrix('X')};
  std::vector<double> weights{0.5, 0.5};
  DenseMatrix xm = letter_matrix('X');
  DenseMatrix expected = 0.5 * (z * x * z) + 0.5 * ((xm * z * xm) * x * (xm * z * xm));
  EXPECT_MATRIX_NEAR(ensemble_twirl_map(ens, weights, z, z, x), expected, 1e-14);
}

TEST(EnsembleTwirlMap, FullCliffordGroupIsATwoDesign) {
  Rng rng(37);
  auto ens = clifford_dense_ensemble(1);
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix a = random_matrix(2, rng), b = random_matrix(2, rng), x = random_matrix(2, rng);
    EXPECT_MATRIX_NEAR(ensemble_twirl_map(ens, a, b, x), haar_twirl_map(a, b, x), 1e-10);
  }
}

TEST(EnsembleTwirlMap, ValidatesMembers) {
  Rng rng(38);
  DenseMatrix a = random_matrix(2, rng);
  std::vector<DenseMatrix> bad{2.0 * DenseMatrix::Identity(2, 2)};
  EXPECT_THROW(ensemble_twirl_map(bad, a, a, a), std::invalid_argument);

  std::vector<DenseMatrix> ens{DenseMatrix::Identity(2, 2), letter_matrix('X')};
  std::vector<double> weights{0.9, 0.3};
  EXPECT_THROW(ensemble_twirl_map(ens, weights, a, a, a), std::invalid_argument);
  std::vector<DenseMatrix> empty;
  EXPECT_THROW(ensemble_twirl_map(empty, a, a, a), std::invalid_argument);
}

TEST(BrutePauliTwirl, SingleSurvivingTerm) {
  Rng rng(39);
  DenseMatrix x = random_matrix(2, rng);
  DenseMatrix xm = letter_matrix('X');
  EXPECT_MATRIX_NEAR(brute_pauli_twirl(xm, xm, x), xm * x * xm, 1e-14);
  DenseMatrix id = DenseMatrix::Identity(2, 2);
  EXPECT_MATRIX_NEAR(brute_pauli_twirl(id, id, x), x, 1e-14);
}

TEST(BrutePauliTwirl, MatchesCoefficientFormula) {
  Rng rng(40);
  for (int n : {1, 2}) {
    Eigen::Index d = Eigen::Index{1} << n;
    for (int trial = 0; trial < 4; ++trial) {
      DenseMatrix a = random_matrix(d, rng), b = random_matrix(d, rng), x = random_matrix(d, rng);
      PauliCoefficients alpha = expand(a), beta = expand(b);
      DenseMatrix expected = DenseMatrix::Zero(d, d);
      for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
        DenseMatrix p = to_dense(PauliLabel::from_index(n, idx));
        expected += alpha.alpha[idx] * beta.alpha[idx] * (p * x * p);
      }
      EXPECT_MATRIX_NEAR(brute_pauli_twirl(a, b, x), expected, 1e-10);
    }
  }
}

TEST(BrutePauliTwirl, IdempotentAsAChannelProjection) {
  Rng rng(41);
  DenseMatrix a = random_matrix(4, rng), b = random_matrix(4, rng), x = random_matrix(4, rng);
  DenseMatrix once = brute_pauli_twirl(a, b, x);
  // Twirling the already-twirled map again leaves it fixed: apply the
  // outer Pauli average to the map X -> brute(A, B, X).
  DenseMatrix twice = DenseMatrix::Zero(4, 4);
  for (uint64_t idx = 0; idx < 16; ++idx) {
    DenseMatrix p = to_dense(PauliLabel::from_index(2, idx));
    twice += p * brute_pauli_twirl(a, b, p * x * p) * p;
  }
  twice /= 16.0;
  EXPECT_MATRIX_NEAR(twice, once, 1e-10);
}

TEST(BrutePauliTwirl, CapacityGuard) {
  DenseMatrix big = DenseMatrix::Identity(16, 16);
  EXPECT_THROW(brute_pauli_twirl(big, big, big), std::domain_error);
}

TEST(ExactAverageFidelity, KnownChannels) {
  EXPECT_DOUBLE_EQ(exact_average_fidelity(identity_channel(1)), 1.0);
  EXPECT_DOUBLE_EQ(exact_average_fidelity(identity_channel(2)), 1.0);
  EXPECT_NEAR(exact_average_fidelity(uniform_pauli_channel(1)), 0.5, 1e-14);
  EXPECT_NEAR(exact_average_fidelity(uniform_pauli_channel(2)), 0.25, 1e-14);
  EXPECT_NEAR(exact_average_fidelity(dephasing_channel(0.5)), 2.0 / 3.0, 1e-14);
}

TEST(ExactAverageFidelity, RejectsNonCptp) {
  KrausChannel halved(1, {0.5 * DenseMatrix::Identity(2, 2)}, false);
  EXPECT_THROW(exact_average_fidelity(halved), std::invalid_argument);
}

TEST(HaarChannelTwirl, KnownParameters) {
  EXPECT_DOUBLE_EQ(haar_channel_twirl(identity_channel(1)).p, 1.0);
  EXPECT_NEAR(haar_channel_twirl(uniform_pauli_channel(1)).p, 0.0, 1e-14);
  EXPECT_NEAR(haar_channel_twirl(dephasing_channel(0.5)).p, 1.0 / 3.0, 1e-14);
}

TEST(HaarChannelTwirl, DepolarizingChannelMatchesDefinition) {
  Rng rng(42);
  ChannelTwirlResult result = haar_channel_twirl(amplitude_damping_channel(0.3));
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix rho = random_density_matrix(2, rng);
    DenseMatrix expected = result.p * rho +
                           (1.0 - result.p) * rho.trace() / 2.0 * DenseMatrix::Identity(2, 2);
    EXPECT_MATRIX_NEAR(result.depolarizing.apply(rho), expected, 1e-12);
  }
}

TEST(HaarChannelTwirl, ConsistentWithAverageFidelity) {
  Rng rng(43);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      KrausChannel ch = random_cptp_channel(n, 3, rng);
      double p = haar_channel_twirl(ch).p;
      double dim = static_cast<double>(ch.dim());
      EXPECT_NEAR(exact_average_fidelity(ch), p + (1.0 - p) / dim, 1e-12);
    }
  }
}

TEST(Superoperator, MatchesDirectApplication) {
  Rng rng(44);
  KrausChannel ch = random_cptp_channel(2, 3, rng);
  DenseMatrix s = channel_superoperator(ch);
  DenseMatrix rho = random_density_matrix(4, rng);
  EXPECT_MATRIX_NEAR(apply_superoperator(s, rho), ch.apply(rho), 1e-12);

  auto ens = clifford_dense_ensemble(1);
  KrausChannel small = random_cptp_channel(1, 2, rng);
  DenseMatrix twirled = twirled_channel_superoperator(ens, small);
  DenseMatrix rho1 = random_density_matrix(2, rng);
  EXPECT_MATRIX_NEAR(apply_superoperator(twirled, rho1),
                     enumerated_channel_twirl(ens, small, rho1), 1e-12);
}

TEST(KrausChannel, ValidationAndHelpers) {
  EXPECT_THROW(KrausChannel(1, {0.5 * DenseMatrix::Identity(2, 2)}), std::invalid_argument);
  EXPECT_THROW(KrausChannel(1, {}), std::invalid_argument);
  EXPECT_THROW(KrausChannel(2, {DenseMatrix::Identity(2, 2)}), std::invalid_argument);
  EXPECT_NO_THROW(KrausChannel(1, {0.5 * DenseMatrix::Identity(2, 2)}, false));

  Rng rng(45);
  KrausChannel ch = random_cptp_channel(2, 4, rng);
  EXPECT_LE(ch.cptp_defect(), 1e-12);
  DenseMatrix rho = random_density_matrix(4, rng);
  EXPECT_NEAR(std::abs(ch.apply(rho).trace() - Complex(1, 0)), 0.0, 1e-12);
}

TEST(KrausChannel, JsonRoundTrip) {
  Rng rng(46);
  KrausChannel ch = random_cptp_channel(1, 3, rng);
  KrausChannel back = channel_from_json(channel_to_json(ch));
  ASSERT_EQ(back.ops.size(), ch.ops.size());
  for (size_t k = 0; k < ch.ops.size(); ++k) {
    EXPECT_MATRIX_NEAR(back.ops[k], ch.ops[k], 0.0);
  }
  EXPECT_THROW(channel_from_json(nlohmann::json{{"n", 1}}), std::invalid_argument);
}

TEST(KrausChannel, TensorWithIdentityPreservesEntanglementFidelity) {
  KrausChannel padded = tensor_with_identity(dephasing_channel(0.5), 1);
  EXPECT_EQ(padded.n, 2);
  EXPECT_LE(padded.cptp_defect(), 1e-12);
  // F_e = sum |Tr A_k|^2 / D^2 is invariant under identity padding.
  EXPECT_NEAR(padded.trace_weight() / 16.0, dephasing_channel(0.5).trace_weight() / 4.0, 1e-13);
}
