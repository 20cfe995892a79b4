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

#include <map>

#include "test_util.hpp"
#include "twirl/twirl.hpp"

using namespace twirl;
using twirl::testing::max_abs_diff;
using twirl::testing::phased_pauli_from_dense;

namespace {

std::vector<Gate> all_gates(int n) {
  std::vector<Gate> gates;
  for (int q = 1; q <= n; ++q) {
    gates.push_back(Gate::h(q));
    gates.push_back(Gate::s(q));
    gates.push_back(Gate::r(q));
  }
  for (int c = 1; c <= n; ++c) {
    for (int t = 1; t <= n; ++t) {
      if (c != t) gates.push_back(Gate::cnot(c, t));
    }
  }
  return gates;
}

}  // namespace

TEST(ConjugateGate, RCyclesXZY) {
  Gate r = Gate::r(1);
  PhasedPauli x(PauliLabel::from_string("X"), 0);
  PhasedPauli z = conjugate_gate(r, x);
  EXPECT_EQ(z.str(), "+Z");
  PhasedPauli y = conjugate_gate(r, z);
  EXPECT_EQ(y.str(), "+Y");
  EXPECT_EQ(conjugate_gate(r, y).str(), "+X");

  // Verified against the dense matrix R = S H.
  DenseMatrix rm = r_gate_matrix();
  EXPECT_MATRIX_NEAR(rm * to_dense(x) * rm.adjoint(), to_dense(z), 1e-15);
}

TEST(ConjugateGate, IdentityLabelFixed) {
  for (const Gate& g : all_gates(3)) {
    PhasedPauli id = PhasedPauli::identity(3);
    EXPECT_EQ(conjugate_gate(g, id), id);
    EXPECT_TRUE(conjugate_label(g, PauliLabel::identity(3)).is_identity());
  }
}

TEST(ConjugateGate, CnotExamples) {
  Gate g = Gate::cnot(2, 1);
  PhasedPauli x2(PauliLabel::from_string("IX"), 0);
  EXPECT_EQ(conjugate_gate(g, x2).str(), "+XX");
  PhasedPauli z1(PauliLabel::from_string("ZI"), 0);
  EXPECT_EQ(conjugate_gate(g, z1).str(), "+ZZ");
}

TEST(ConjugateGate, AgreesWithDenseConjugationExactly) {
  for (int n : {1, 2}) {
    for (const Gate& g : all_gates(n)) {
      DenseMatrix u = gate_to_dense(g, n);
      for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
        for (int phase = 0; phase < 4; ++phase) {
          PhasedPauli p(PauliLabel::from_index(n, idx), phase);
          PhasedPauli got = conjugate_gate(g, p);
          DenseMatrix expected = u * to_dense(p) * u.adjoint();
          ASSERT_MATRIX_NEAR(to_dense(got), expected, 1e-12);
          auto extracted = phased_pauli_from_dense(expected);
          ASSERT_TRUE(extracted.has_value());
          ASSERT_EQ(got, *extracted) << gate_str(g) << " on " << p.str();
        }
      }
    }
  }
}

TEST(ConjugateLabel, MatchesPhasedRule) {
  for (const Gate& g : all_gates(2)) {
    for (uint64_t idx = 0; idx < 16; ++idx) {
      PauliLabel a = PauliLabel::from_index(2, idx);
      EXPECT_EQ(conjugate_label(g, a), conjugate_gate(g, PhasedPauli(a, 0)).label);
    }
  }
}

TEST(ConjugateGate, OutOfRangeQubitThrows) {
  EXPECT_THROW(conjugate_gate(Gate::h(3), PhasedPauli::identity(2)), std::out_of_range);
  EXPECT_THROW(conjugate_gate(Gate::cnot(1, 1), PhasedPauli::identity(2)),
               std::invalid_argument);
}

TEST(Tableau, EmptySequenceIsIdentity) {
  CliffordTableau t = tableau_from_gates(2, {});
  EXPECT_EQ(t, CliffordTableau::identity(2));
  PhasedPauli p(PauliLabel::from_string("YX"), 3);
  EXPECT_EQ(t.apply(p), p);
}

TEST(Tableau, HadamardSquaresToIdentity) {
  std::vector<Gate> gates{Gate::h(1), Gate::h(1)};
  EXPECT_EQ(tableau_from_gates(1, gates), CliffordTableau::identity(1));
}

TEST(Tableau, MatchesGateByGateFolding) {
  std::vector<Gate> hs{Gate::h(1), Gate::s(1)};
  CliffordTableau t = tableau_from_gates(1, hs);
  for (uint64_t idx = 0; idx < 4; ++idx) {
    PhasedPauli p(PauliLabel::from_index(1, idx), 0);
    PhasedPauli folded = conjugate_gate(hs[1], conjugate_gate(hs[0], p));
    EXPECT_EQ(t.apply(p), folded);
  }

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng.below(3));
    std::vector<Gate> word;
    std::vector<Gate> pool = all_gates(n);
    for (int i = 0; i < 24; ++i) word.push_back(pool[rng.below(pool.size())]);
    CliffordTableau tab = tableau_from_gates(n, word);
    for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
      PhasedPauli p(PauliLabel::from_index(n, idx), static_cast<int>(rng.below(4)));
      PhasedPauli folded = p;
      for (const Gate& g : word) folded = conjugate_gate(g, folded);
      ASSERT_EQ(tab.apply(p), folded);
    }
  }
}

TEST(Tableau, PreservesSymplecticForm) {
  Rng rng(22);
  auto elements = enumerate_clifford(2);
  for (int trial = 0; trial < 200; ++trial) {
    const CliffordTableau& t = elements[rng.below(elements.size())].tableau;
    PauliLabel a = random_label(2, rng), b = random_label(2, rng);
    EXPECT_EQ(symplectic_product(t.label_image(a), t.label_image(b)),
              symplectic_product(a, b));
  }
}

TEST(Enumerate, GroupSizes) {
  EXPECT_EQ(enumerate_clifford(1).size(), 24u);
  EXPECT_EQ(enumerate_clifford(2).size(), 11520u);
  EXPECT_THROW(enumerate_clifford(3), std::domain_error);
}

TEST(Enumerate, EveryTableauFixesIdentityAndPermutesTheRest) {
  for (int n : {1, 2}) {
    for (const CliffordElement& e : enumerate_clifford(n)) {
      EXPECT_TRUE(e.tableau.label_image(PauliLabel::identity(n)).is_identity());
      std::vector<bool> hit(PauliLabel::label_count(n), false);
      for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
        uint64_t img = e.tableau.label_image(PauliLabel::from_index(n, idx)).index();
        ASSERT_FALSE(hit[img]);
        hit[img] = true;
        if (idx != 0) ASSERT_NE(img, 0u);
      }
    }
  }
}

TEST(Enumerate, NonIdentityImagesEquidistributed) {
  for (int n : {1, 2}) {
    auto elements = enumerate_clifford(n);
    uint64_t labels = PauliLabel::label_count(n);
    uint64_t expected = elements.size() / (labels - 1);
    for (uint64_t src = 1; src < labels; ++src) {
      std::vector<uint64_t> counts(labels, 0);
      PauliLabel a = PauliLabel::from_index(n, src);
      for (const CliffordElement& e : elements) {
        counts[e.tableau.label_image(a).index()]++;
      }
      EXPECT_EQ(counts[0], 0u);
      for (uint64_t dst = 1; dst < labels; ++dst) {
        ASSERT_EQ(counts[dst], expected) << "n=" << n << " src=" << src << " dst=" << dst;
      }
    }
  }
}

TEST(Enumerate, CircuitsReproduceTableaus) {
  Rng rng(23);
  auto elements = enumerate_clifford(2);
  for (int trial = 0; trial < 50; ++trial) {
    const CliffordElement& e = elements[rng.below(elements.size())];
    EXPECT_EQ(tableau_from_gates(2, e.circuit), e.tableau);
  }
}

TEST(CosetRepresentatives, CountsAndDistinctness) {
  auto reps1 = clifford_coset_representatives(1);
  auto reps2 = clifford_coset_representatives(2);
  EXPECT_EQ(reps1.size(), 6u);
  EXPECT_EQ(reps2.size(), 720u);
  std::map<std::vector<uint64_t>, int> seen;
  for (const CliffordElement& e : reps2) seen[e.tableau.symplectic_key()]++;
  for (const auto& [key, count] : seen) EXPECT_EQ(count, 1);
}

TEST(GateText, RoundTrip) {
  std::vector<Gate> gates{Gate::h(1), Gate::s(3), Gate::r(2), Gate::cnot(2, 1)};
  std::string text = gates_to_text(gates);
  EXPECT_EQ(text, "H 1\nS 3\nR 2\nCNOT 2 1\n");
  EXPECT_EQ(parse_gate_text(text), gates);
  EXPECT_THROW(parse_gate("T 1"), std::invalid_argument);
  EXPECT_THROW(parse_gate("H"), std::invalid_argument);
  EXPECT_THROW(parse_gate("H 1 2"), std::invalid_argument);
}

TEST(GateDense, MatchesKnownMatrices) {
  DenseMatrix h = gate_to_dense(Gate::h(1), 1);
  EXPECT_MATRIX_NEAR(h, hadamard_matrix(), 1e-15);
  // CNOT with control 2 and target 1 in the qubit-1-most-significant
  // convention: |t c> -> |t^c c>.
  DenseMatrix cx = gate_to_dense(Gate::cnot(2, 1), 2);
  DenseMatrix expected(4, 4);
  expected << 1, 0, 0, 0,
              0, 0, 0, 1,
              0, 0, 1, 0,
              0, 1, 0, 0;
  EXPECT_MATRIX_NEAR(cx, expected, 0.0);
}
