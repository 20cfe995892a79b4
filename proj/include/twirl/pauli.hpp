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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "twirl/bits.hpp"
#include "twirl/rng.hpp"

namespace twirl {

/// An n-qubit Pauli operator modulo phase, encoded as an (x, z) pair of
/// bit strings: qubit k carries X^{x_k} Z^{z_k}. Qubit k maps to bit
/// k-1. The all-zero label is the identity.
///
/// Per-qubit letters follow (x, z): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z,
/// where the letter stands for the Hermitian operator i^{x z} X^x Z^z.
struct PauliLabel {
  int n = 0;
  BitVec x, z;

  PauliLabel() = default;
  PauliLabel(int n_, BitVec x_, BitVec z_) : n(n_), x(std::move(x_)), z(std::move(z_)) {
    if (n < 1) throw std::invalid_argument("PauliLabel: qubit count must be positive");
    if (x.size() != n || z.size() != n) {
      throw std::invalid_argument("PauliLabel: bit string length must equal qubit count");
    }
  }

  static PauliLabel identity(int n) { return PauliLabel(n, BitVec(n), BitVec(n)); }

  /// Parses a string over {I,X,Y,Z}; qubit 1 is the leftmost character.
  static PauliLabel from_string(std::string_view s) {
    int n = static_cast<int>(s.size());
    if (n == 0) throw std::invalid_argument("PauliLabel: empty label string");
    BitVec x(n), z(n);
    for (int k = 0; k < n; ++k) {
      switch (s[k]) {
        case 'I': break;
        case 'X': x.set(k, true); break;
        case 'Y': x.set(k, true); z.set(k, true); break;
        case 'Z': z.set(k, true); break;
        default:
          throw std::invalid_argument(
              fmt::format("PauliLabel: invalid character '{}' in \"{}\"", s[k], s));
      }
    }
    return PauliLabel(n, std::move(x), std::move(z));
  }

  /// Single-qubit letter placed on `qubit` (1-based), identity elsewhere.
  static PauliLabel single(int n, int qubit, char letter) {
    PauliLabel p = identity(n);
    p.set_letter(qubit, letter);
    return p;
  }

  /// Inverse of index(); requires n <= 31 so the index fits in 62 bits.
  static PauliLabel from_index(int n, uint64_t index) {
    check_indexable(n);
    if (index >> (2 * n)) {
      throw std::out_of_range(fmt::format("PauliLabel: index {} out of range for n={}", index, n));
    }
    return PauliLabel(n, BitVec::from_uint(n, index >> n),
                      BitVec::from_uint(n, index & BitVec::mask_low(n)));
  }

  /// Bijection onto 0..4^n-1: the integer with x as the high n bits and
  /// z as the low n bits. The identity maps to 0.
  uint64_t index() const {
    check_indexable(n);
    return (x.to_uint() << n) | z.to_uint();
  }

  static uint64_t label_count(int n) {
    check_indexable(n);
    return uint64_t{1} << (2 * n);
  }

  bool is_identity() const { return !x.any() && !z.any(); }

  /// Number of non-identity tensor components.
  int weight() const {
    int c = 0;
    for (int w = 0; w < x.word_count(); ++w) {
      c += std::popcount(x.word(w) | z.word(w));
    }
    return c;
  }

  char letter(int qubit) const {
    check_qubit(qubit);
    bool xb = x.get(qubit - 1), zb = z.get(qubit - 1);
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }

  void set_letter(int qubit, char letter) {
    check_qubit(qubit);
    bool xb = false, zb = false;
    switch (letter) {
      case 'I': break;
      case 'X': xb = true; break;
      case 'Y': xb = zb = true; break;
      case 'Z': zb = true; break;
      default: throw std::invalid_argument(fmt::format("PauliLabel: invalid letter '{}'", letter));
    }
    x.set(qubit - 1, xb);
    z.set(qubit - 1, zb);
  }

  std::string str() const {
    std::string s(n, 'I');
    for (int k = 1; k <= n; ++k) s[k - 1] = letter(k);
    return s;
  }

  bool operator==(const PauliLabel&) const = default;

  size_t hash() const {
    size_t h = x.hash();
    return h ^ (z.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }

 private:
  static void check_indexable(int n) {
    if (n > 31) {
      throw std::domain_error(
          fmt::format("PauliLabel: label indexing supports n <= 31, got {}", n));
    }
  }
  void check_qubit(int qubit) const {
    if (qubit < 1 || qubit > n) {
      throw std::out_of_range(fmt::format("PauliLabel: qubit {} outside 1..{}", qubit, n));
    }
  }
};

struct PauliLabelHash {
  size_t operator()(const PauliLabel& p) const { return p.hash(); }
};

/// Uniform over all 4^n labels, identity included.
inline PauliLabel random_label(int n, Rng& rng) {
  BitVec x(n), z(n);
  for (int w = 0; w < x.word_count(); ++w) {
    int bits = std::min(64, n - 64 * w);
    x.word(w) = rng.u64() & BitVec::mask_low(bits);
    z.word(w) = rng.u64() & BitVec::mask_low(bits);
  }
  return PauliLabel(n, std::move(x), std::move(z));
}

inline void check_same_n(const PauliLabel& a, const PauliLabel& b) {
  if (a.n != b.n) {
    throw std::invalid_argument(
        fmt::format("Pauli dimension mismatch: n={} vs n={}", a.n, b.n));
  }
}

/// GF(2) symplectic inner product (a.x . b.z + a.z . b.x) mod 2.
/// 0 iff the dense operators commute, 1 iff they anticommute.
inline int symplectic_product(const PauliLabel& a, const PauliLabel& b) {
  check_same_n(a, b);
  return (BitVec::and_popcount(a.x, b.z) + BitVec::and_popcount(a.z, b.x)) & 1;
}

/// A Pauli operator with an explicit i^phase prefactor. The dense value
/// is i^phase times the tensor product of the Hermitian letters, so
/// phase in {0, 2} means a Hermitian operator.
struct PhasedPauli {
  PauliLabel label;
  int phase = 0;  // exponent of i, in {0, 1, 2, 3}

  PhasedPauli() = default;
  PhasedPauli(PauliLabel l, int ph) : label(std::move(l)), phase(((ph % 4) + 4) % 4) {}

  static PhasedPauli identity(int n) { return PhasedPauli(PauliLabel::identity(n), 0); }

  int n() const { return label.n; }

  PhasedPauli adjoint() const { return PhasedPauli(label, (4 - phase) % 4); }

  std::string str() const {
    static constexpr const char* kPrefix[4] = {"+", "i", "-", "-i"};
    return std::string(kPrefix[phase]) + label.str();
  }

  bool operator==(const PhasedPauli&) const = default;
};

/// Exact product of two phased Paulis. The label part is the XOR of the
/// labels; the i^k phase comes from commuting the X and Z parts past
/// each other and re-normalizing each qubit to its Hermitian letter:
///   k = sum_k (ax az + bx bz + 2 az bx - cx cz)   (mod 4, c = a xor b).
inline PhasedPauli mul(const PhasedPauli& p, const PhasedPauli& q) {
  check_same_n(p.label, q.label);
  const PauliLabel& a = p.label;
  const PauliLabel& b = q.label;
  long k = p.phase + q.phase;
  for (int w = 0; w < a.x.word_count(); ++w) {
    uint64_t cx = a.x.word(w) ^ b.x.word(w);
    uint64_t cz = a.z.word(w) ^ b.z.word(w);
    k += std::popcount(a.x.word(w) & a.z.word(w));
    k += std::popcount(b.x.word(w) & b.z.word(w));
    k += 2 * std::popcount(a.z.word(w) & b.x.word(w));
    k -= std::popcount(cx & cz);
  }
  return PhasedPauli(PauliLabel(a.n, a.x ^ b.x, a.z ^ b.z), static_cast<int>(((k % 4) + 4) % 4));
}

inline PhasedPauli operator*(const PhasedPauli& p, const PhasedPauli& q) { return mul(p, q); }

/// Coefficients alpha_a of an operator expansion A = sum_a alpha_a P_a
/// over the 4^n Hermitian Pauli operators, indexed by PauliLabel::index.
struct PauliCoefficients {
  int n = 0;
  std::vector<std::complex<double>> alpha;
};

}  // namespace twirl
