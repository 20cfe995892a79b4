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

#include <deque>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "twirl/pauli.hpp"

namespace twirl {

enum class GateKind { H, S, R, CNOT };

/// One Clifford generator gate. H, S and R = S*H act on qubit q1;
/// CNOT has control q1 and target q2. Qubit indices are 1-based.
struct Gate {
  GateKind kind;
  int q1 = 0;
  int q2 = 0;

  static Gate h(int q) { return {GateKind::H, q, 0}; }
  static Gate s(int q) { return {GateKind::S, q, 0}; }
  static Gate r(int q) { return {GateKind::R, q, 0}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target}; }

  bool operator==(const Gate&) const = default;
};

inline void check_gate(const Gate& g, int n) {
  auto check_qubit = [&](int q) {
    if (q < 1 || q > n) {
      throw std::out_of_range(fmt::format("Gate: qubit {} outside 1..{}", q, n));
    }
  };
  check_qubit(g.q1);
  if (g.kind == GateKind::CNOT) {
    check_qubit(g.q2);
    if (g.q1 == g.q2) throw std::invalid_argument("Gate: CNOT control equals target");
  }
}

inline std::string gate_str(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return fmt::format("H {}", g.q1);
    case GateKind::S: return fmt::format("S {}", g.q1);
    case GateKind::R: return fmt::format("R {}", g.q1);
    case GateKind::CNOT: return fmt::format("CNOT {} {}", g.q1, g.q2);
  }
  throw std::logic_error("gate_str: bad kind");
}

inline Gate parse_gate(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string kind;
  in >> kind;
  auto read_qubit = [&] {
    int q;
    if (!(in >> q)) throw std::invalid_argument(fmt::format("parse_gate: bad line \"{}\"", line));
    return q;
  };
  Gate g;
  if (kind == "H") {
    g = Gate::h(read_qubit());
  } else if (kind == "S") {
    g = Gate::s(read_qubit());
  } else if (kind == "R") {
    g = Gate::r(read_qubit());
  } else if (kind == "CNOT") {
    int c = read_qubit();
    g = Gate::cnot(c, read_qubit());
  } else {
    throw std::invalid_argument(fmt::format("parse_gate: unknown gate \"{}\"", kind));
  }
  std::string rest;
  if (in >> rest) throw std::invalid_argument(fmt::format("parse_gate: trailing tokens in \"{}\"", line));
  return g;
}

/// One gate per line, e.g. "H 1" / "S 3" / "CNOT 2 1".
inline std::string gates_to_text(std::span<const Gate> gates) {
  std::string out;
  for (const Gate& g : gates) {
    out += gate_str(g);
    out += '\n';
  }
  return out;
}

inline std::vector<Gate> parse_gate_text(std::string_view text) {
  std::vector<Gate> gates;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    gates.push_back(parse_gate(line));
  }
  return gates;
}

/// Phase-free conjugation of a label by one gate:
///   H: (x, z) -> (z, x)        S: (x, z) -> (x, z^x)
///   R: (x, z) -> (z, x^z)      CNOT(c,t): x_t ^= x_c, z_c ^= z_t.
inline PauliLabel conjugate_label(const Gate& g, PauliLabel a) {
  check_gate(g, a.n);
  int q = g.q1 - 1;
  switch (g.kind) {
    case GateKind::H: {
      bool xb = a.x.get(q), zb = a.z.get(q);
      a.x.set(q, zb);
      a.z.set(q, xb);
      break;
    }
    case GateKind::S:
      if (a.x.get(q)) a.z.flip(q);
      break;
    case GateKind::R: {
      bool xb = a.x.get(q), zb = a.z.get(q);
      a.x.set(q, zb);
      a.z.set(q, xb ^ zb);
      break;
    }
    case GateKind::CNOT: {
      int t = g.q2 - 1;
      if (a.x.get(q)) a.x.flip(t);
      if (a.z.get(t)) a.z.flip(q);
      break;
    }
  }
  return a;
}

/// Exact conjugation g p g^dagger including the phase. The sign comes
/// from re-normalizing the acted qubits to Hermitian letters: writing
/// the component as i^{xz} X^x Z^z, conjugation maps the X^x Z^z part
/// with a known image and the i^{xz} bookkeeping yields the sign.
inline PhasedPauli conjugate_gate(const Gate& g, const PhasedPauli& p) {
  check_gate(g, p.n());
  PauliLabel a = p.label;
  int q = g.q1 - 1;
  int phase = p.phase;
  switch (g.kind) {
    case GateKind::H:
    case GateKind::S:
      // H: X<->Z, Y -> -Y.  S: X -> Y, Y -> -X, Z -> Z.
      if (p.label.x.get(q) && p.label.z.get(q)) phase += 2;
      break;
    case GateKind::R:
      // X -> Z -> Y -> X, all with + sign.
      break;
    case GateKind::CNOT: {
      int t = g.q2 - 1;
      int before = (a.x.get(q) & a.z.get(q)) + (a.x.get(t) & a.z.get(t));
      PauliLabel after = conjugate_label(g, a);
      int now = (after.x.get(q) & after.z.get(q)) + (after.x.get(t) & after.z.get(t));
      phase += before - now;
      break;
    }
  }
  return PhasedPauli(conjugate_label(g, std::move(a)), phase);
}

/// Conjugation action of a Clifford element, stored as the signed Pauli
/// images of the generators X_k and Z_k. Rows of the images' (x, z)
/// bits form the 2n x 2n binary symplectic matrix; the sign bits are
/// the 2n tableau signs. Global phase is quotiented out.
struct CliffordTableau {
  int n = 0;
  std::vector<PauliLabel> x_image, z_image;
  std::vector<uint8_t> x_sign, z_sign;  // 1 means the image carries a - sign

  static CliffordTableau identity(int n) {
    CliffordTableau t;
    t.n = n;
    for (int k = 1; k <= n; ++k) {
      t.x_image.push_back(PauliLabel::single(n, k, 'X'));
      t.z_image.push_back(PauliLabel::single(n, k, 'Z'));
    }
    t.x_sign.assign(n, 0);
    t.z_sign.assign(n, 0);
    return t;
  }

  /// Label part of conjugation: XOR of generator images over set bits.
  /// Linear over GF(2) by construction.
  PauliLabel label_image(const PauliLabel& a) const {
    check_n(a.n);
    PauliLabel out = PauliLabel::identity(n);
    for (int k = 0; k < n; ++k) {
      if (a.x.get(k)) {
        out.x ^= x_image[k].x;
        out.z ^= x_image[k].z;
      }
      if (a.z.get(k)) {
        out.x ^= z_image[k].x;
        out.z ^= z_image[k].z;
      }
    }
    return out;
  }

  /// Exact conjugation U p U^dagger. The input is expanded into the
  /// generator product (prod X_k^{x_k})(prod Z_k^{z_k}) and the signed
  /// generator images are multiplied back together.
  PhasedPauli apply(const PhasedPauli& p) const {
    check_n(p.n());
    int start = p.phase + BitVec::and_popcount(p.label.x, p.label.z);
    PhasedPauli acc(PauliLabel::identity(n), start);
    for (int k = 0; k < n; ++k) {
      if (p.label.x.get(k)) acc = mul(acc, PhasedPauli(x_image[k], 2 * x_sign[k]));
    }
    for (int k = 0; k < n; ++k) {
      if (p.label.z.get(k)) acc = mul(acc, PhasedPauli(z_image[k], 2 * z_sign[k]));
    }
    return acc;
  }

  /// Canonical serialization of (symplectic matrix, signs); two equal
  /// keys mean the same Clifford element modulo global phase.
  std::vector<uint64_t> key() const {
    std::vector<uint64_t> k;
    k.reserve(static_cast<size_t>(2 * n) * (2 * BitVec::word_count(n) + 1));
    auto push = [&](const PauliLabel& img, uint8_t sign) {
      for (int w = 0; w < img.x.word_count(); ++w) k.push_back(img.x.word(w));
      for (int w = 0; w < img.z.word_count(); ++w) k.push_back(img.z.word(w));
      k.push_back(sign);
    };
    for (int i = 0; i < n; ++i) push(x_image[i], x_sign[i]);
    for (int i = 0; i < n; ++i) push(z_image[i], z_sign[i]);
    return k;
  }

  /// Serialization of the symplectic matrix alone (signs dropped);
  /// equal keys mean the same coset of the Pauli subgroup.
  std::vector<uint64_t> symplectic_key() const {
    std::vector<uint64_t> k;
    auto push = [&](const PauliLabel& img) {
      for (int w = 0; w < img.x.word_count(); ++w) k.push_back(img.x.word(w));
      for (int w = 0; w < img.z.word_count(); ++w) k.push_back(img.z.word(w));
    };
    for (int i = 0; i < n; ++i) push(x_image[i]);
    for (int i = 0; i < n; ++i) push(z_image[i]);
    return k;
  }

  bool operator==(const CliffordTableau&) const = default;

 private:
  void check_n(int m) const {
    if (m != n) {
      throw std::invalid_argument(fmt::format("CliffordTableau: n mismatch ({} vs {})", m, n));
    }
  }
};

/// Updates the tableau of U to the tableau of g*U by conjugating every
/// generator image with g.
inline void compose_gate(CliffordTableau& t, const Gate& g) {
  check_gate(g, t.n);
  for (int k = 0; k < t.n; ++k) {
    PhasedPauli nx = conjugate_gate(g, PhasedPauli(t.x_image[k], 2 * t.x_sign[k]));
    t.x_image[k] = nx.label;
    t.x_sign[k] = static_cast<uint8_t>(nx.phase / 2);
    PhasedPauli nz = conjugate_gate(g, PhasedPauli(t.z_image[k], 2 * t.z_sign[k]));
    t.z_image[k] = nz.label;
    t.z_sign[k] = static_cast<uint8_t>(nz.phase / 2);
  }
}

/// Tableau of the composite circuit; gates are applied in sequence
/// order, so the action equals folding conjugate_gate left to right.
inline CliffordTableau tableau_from_gates(int n, std::span<const Gate> gates) {
  CliffordTableau t = CliffordTableau::identity(n);
  for (const Gate& g : gates) compose_gate(t, g);
  return t;
}

/// A Clifford group element together with one generator circuit that
/// realizes it, in application order.
struct CliffordElement {
  CliffordTableau tableau;
  std::vector<Gate> circuit;
};

inline constexpr int kMaxEnumerationQubits = 2;

namespace detail {

struct KeyHash {
  size_t operator()(const std::vector<uint64_t>& k) const {
    size_t h = k.size();
    for (uint64_t w : k) {
      h ^= static_cast<size_t>(splitmix64(w)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace detail

/// Breadth-first closure of {H_k, S_k, CNOT_jk} under composition,
/// deduplicated by (symplectic matrix, signs). Exhaustive and exact:
/// 24 elements for n=1 and 11520 for n=2. The identity comes first and
/// circuits are shortest-path words from the generators.
inline std::vector<CliffordElement> enumerate_clifford(int n) {
  if (n < 1 || n > kMaxEnumerationQubits) {
    throw std::domain_error(
        fmt::format("enumerate_clifford: n={} exceeds capacity (n <= {})", n, kMaxEnumerationQubits));
  }
  std::vector<Gate> generators;
  for (int q = 1; q <= n; ++q) {
    generators.push_back(Gate::h(q));
    generators.push_back(Gate::s(q));
  }
  for (int c = 1; c <= n; ++c) {
    for (int t = 1; t <= n; ++t) {
      if (c != t) generators.push_back(Gate::cnot(c, t));
    }
  }

  struct Node {
    CliffordTableau tableau;
    int parent;
    Gate via;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<uint64_t>, int, detail::KeyHash> seen;

  CliffordTableau id = CliffordTableau::identity(n);
  nodes.push_back({id, -1, Gate::h(1)});
  seen.emplace(id.key(), 0);

  for (size_t head = 0; head < nodes.size(); ++head) {
    for (const Gate& g : generators) {
      CliffordTableau next = nodes[head].tableau;
      compose_gate(next, g);
      auto key = next.key();
      if (seen.emplace(std::move(key), static_cast<int>(nodes.size())).second) {
        nodes.push_back({std::move(next), static_cast<int>(head), g});
      }
    }
  }

  std::vector<CliffordElement> out;
  out.reserve(nodes.size());
  for (const Node& node : nodes) {
    CliffordElement e;
    e.tableau = node.tableau;
    std::vector<Gate> rev;
    for (int i = static_cast<int>(&node - nodes.data()); i > 0; i = nodes[i].parent) {
      rev.push_back(nodes[i].via);
    }
    e.circuit.assign(rev.rbegin(), rev.rend());
    out.push_back(std::move(e));
  }
  return out;
}

/// One representative per coset of the Pauli subgroup: elements that
/// share a symplectic matrix differ only by Pauli conjugation signs.
/// 6 representatives for n=1, 720 for n=2.
inline std::vector<CliffordElement> clifford_coset_representatives(int n) {
  std::vector<CliffordElement> all = enumerate_clifford(n);
  std::unordered_map<std::vector<uint64_t>, bool, detail::KeyHash> seen;
  std::vector<CliffordElement> reps;
  for (CliffordElement& e : all) {
    auto key = e.tableau.symplectic_key();
    if (seen.emplace(std::move(key), true).second) reps.push_back(std::move(e));
  }
  return reps;
}

}  // namespace twirl
