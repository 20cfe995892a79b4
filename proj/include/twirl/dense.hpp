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

#include <bit>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "twirl/clifford.hpp"
#include "twirl/pauli.hpp"
#include "twirl/rng.hpp"

namespace twirl {

using DenseMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Storage guard for dense 2^n x 2^n matrices.
inline constexpr int kMaxDenseQubits = 12;

inline void check_dense_capacity(int n) {
  if (n < 1 || n > kMaxDenseQubits) {
    throw std::domain_error(
        fmt::format("dense capacity: n={} outside 1..{}", n, kMaxDenseQubits));
  }
}

inline Eigen::Index dense_dim(int n) {
  check_dense_capacity(n);
  return Eigen::Index{1} << n;
}

/// Computational-basis bit of `qubit` (1-based); qubit 1 is the most
/// significant bit, matching "qubit 1 leftmost" in label strings and
/// the leftmost factor of tensor products.
inline uint64_t dense_qubit_bit(int n, int qubit) {
  return uint64_t{1} << (n - qubit);
}

/// Maps a label-side bit vector (qubit k at bit k-1) to a word aligned
/// with computational-basis indices (qubit k at bit n-k).
inline uint64_t dense_aligned(const BitVec& v, int n) {
  uint64_t out = 0;
  for (int k = 0; k < n; ++k) {
    if (v.get(k)) out |= uint64_t{1} << (n - 1 - k);
  }
  return out;
}

inline constexpr Complex kImagUnit{0.0, 1.0};

inline Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Dense matrix of a phased Pauli: i^phase times the tensor product of
/// Hermitian letters. Each column c has a single entry at row c ^ x.
inline DenseMatrix to_dense(const PhasedPauli& p) {
  int n = p.n();
  Eigen::Index dim = dense_dim(n);
  uint64_t xm = dense_aligned(p.label.x, n);
  uint64_t zm = dense_aligned(p.label.z, n);
  Complex scale = i_power(p.phase + BitVec::and_popcount(p.label.x, p.label.z));
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  for (uint64_t c = 0; c < static_cast<uint64_t>(dim); ++c) {
    double sign = (std::popcount(zm & c) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(c ^ xm), static_cast<Eigen::Index>(c)) = scale * sign;
  }
  return m;
}

inline DenseMatrix to_dense(const PauliLabel& a) { return to_dense(PhasedPauli(a, 0)); }

inline int qubits_for_dim(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument(
        fmt::format("matrix dimension {} is not a power of two >= 2", dim));
  }
  return std::countr_zero(static_cast<uint64_t>(dim));
}

inline void check_square(const DenseMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(fmt::format("{}: matrix is {}x{}, not square", who, a.rows(), a.cols()));
  }
}

inline constexpr int kMaxExpandQubits = 8;

/// Pauli-basis coefficients alpha_a = Tr(P_a A) / D. Exact single-pass
/// per label using the one-entry-per-column structure of P_a.
inline PauliCoefficients expand(const DenseMatrix& a) {
  check_square(a, "expand");
  int n = qubits_for_dim(a.rows());
  if (n > kMaxExpandQubits) {
    throw std::domain_error(fmt::format("expand: n={} exceeds capacity (n <= {})", n, kMaxExpandQubits));
  }
  uint64_t dim = uint64_t{1} << n;
  PauliCoefficients coeff;
  coeff.n = n;
  coeff.alpha.resize(PauliLabel::label_count(n));
  for (uint64_t idx = 0; idx < coeff.alpha.size(); ++idx) {
    PauliLabel label = PauliLabel::from_index(n, idx);
    uint64_t xm = dense_aligned(label.x, n);
    uint64_t zm = dense_aligned(label.z, n);
    Complex sum = 0;
    for (uint64_t c = 0; c < dim; ++c) {
      double sign = (std::popcount(zm & c) & 1) ? -1.0 : 1.0;
      sum += sign * a(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c ^ xm));
    }
    sum *= i_power(BitVec::and_popcount(label.x, label.z));
    coeff.alpha[idx] = sum / static_cast<double>(dim);
  }
  return coeff;
}

/// Sum alpha_a P_a back into a dense matrix.
inline DenseMatrix reconstruct(const PauliCoefficients& coeff) {
  uint64_t dim = uint64_t{1} << coeff.n;
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (uint64_t idx = 0; idx < coeff.alpha.size(); ++idx) {
    if (coeff.alpha[idx] == Complex{0.0, 0.0}) continue;
    PauliLabel label = PauliLabel::from_index(coeff.n, idx);
    uint64_t xm = dense_aligned(label.x, coeff.n);
    uint64_t zm = dense_aligned(label.z, coeff.n);
    Complex scale = coeff.alpha[idx] * i_power(BitVec::and_popcount(label.x, label.z));
    for (uint64_t c = 0; c < dim; ++c) {
      double sign = (std::popcount(zm & c) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(c ^ xm), static_cast<Eigen::Index>(c)) += scale * sign;
    }
  }
  return out;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline const DenseMatrix& pauli_x_matrix() {
  static const DenseMatrix m = (DenseMatrix(2, 2) << 0, 1, 1, 0).finished();
  return m;
}
inline const DenseMatrix& pauli_y_matrix() {
  static const DenseMatrix m =
      (DenseMatrix(2, 2) << 0, -kImagUnit, kImagUnit, 0).finished();
  return m;
}
inline const DenseMatrix& pauli_z_matrix() {
  static const DenseMatrix m = (DenseMatrix(2, 2) << 1, 0, 0, -1).finished();
  return m;
}
inline const DenseMatrix& hadamard_matrix() {
  static const DenseMatrix m =
      (DenseMatrix(2, 2) << 1, 1, 1, -1).finished() / std::numbers::sqrt2;
  return m;
}
inline const DenseMatrix& phase_gate_matrix() {
  static const DenseMatrix m = (DenseMatrix(2, 2) << 1, 0, 0, kImagUnit).finished();
  return m;
}
inline const DenseMatrix& r_gate_matrix() {
  static const DenseMatrix m = phase_gate_matrix() * hadamard_matrix();
  return m;
}

/// Dense unitary of one gate embedded into n qubits.
inline DenseMatrix gate_to_dense(const Gate& g, int n) {
  check_gate(g, n);
  Eigen::Index dim = dense_dim(n);
  if (g.kind == GateKind::CNOT) {
    uint64_t control = dense_qubit_bit(n, g.q1);
    uint64_t target = dense_qubit_bit(n, g.q2);
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    for (uint64_t j = 0; j < static_cast<uint64_t>(dim); ++j) {
      uint64_t out = (j & control) ? (j ^ target) : j;
      m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(j)) = 1.0;
    }
    return m;
  }
  const DenseMatrix* local = nullptr;
  switch (g.kind) {
    case GateKind::H: local = &hadamard_matrix(); break;
    case GateKind::S: local = &phase_gate_matrix(); break;
    case GateKind::R: local = &r_gate_matrix(); break;
    default: throw std::logic_error("gate_to_dense: bad kind");
  }
  DenseMatrix m = DenseMatrix::Identity(1, 1);
  for (int q = 1; q <= n; ++q) {
    m = kron(m, q == g.q1 ? *local : DenseMatrix::Identity(2, 2));
  }
  return m;
}

/// Unitary of a gate sequence in application order (first gate acts
/// first on the state, i.e. is the rightmost factor).
inline DenseMatrix unitary_from_gates(int n, std::span<const Gate> gates) {
  DenseMatrix u = DenseMatrix::Identity(dense_dim(n), dense_dim(n));
  for (const Gate& g : gates) u = gate_to_dense(g, n) * u;
  return u;
}

/// Dense unitaries of the full enumerated Clifford group, one matrix
/// per element (global phase fixed by the generator word).
inline std::vector<DenseMatrix> clifford_dense_ensemble(int n) {
  std::vector<CliffordElement> elements = enumerate_clifford(n);
  std::vector<DenseMatrix> out;
  out.reserve(elements.size());
  for (const CliffordElement& e : elements) {
    out.push_back(unitary_from_gates(n, e.circuit));
  }
  return out;
}

/// Complex Gaussian matrix scaled to unit Frobenius norm; the standard
/// generic test operator.
inline DenseMatrix random_matrix(Eigen::Index dim, Rng& rng) {
  DenseMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = Complex(rng.gauss(), rng.gauss());
    }
  }
  m /= m.norm();
  return m;
}

/// Hermitian unit-trace positive matrix (a random density operator).
inline DenseMatrix random_density_matrix(Eigen::Index dim, Rng& rng) {
  DenseMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      g(i, j) = Complex(rng.gauss(), rng.gauss());
    }
  }
  DenseMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return rho;
}

}  // namespace twirl
