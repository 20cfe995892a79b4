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

#include <functional>
#include <span>
#include <vector>

#include <fmt/format.h>

#include "twirl/kraus.hpp"

namespace twirl {

inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-8;
inline constexpr int kMaxBruteForceQubits = 3;

inline void check_same_dim(const DenseMatrix& a, const DenseMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(fmt::format("{}: dimension mismatch", who));
  }
}

/// Closed form of the Haar average of U^t A U X U^t B U over U(D):
///   Tr(AB) Tr(X)/D * I/D
///   + [D Tr(A) Tr(B) - Tr(AB)] / [D (D^2 - 1)] * (X - Tr(X) I/D).
inline DenseMatrix haar_twirl_map(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& x) {
  check_square(a, "haar_twirl_map");
  check_same_dim(a, b, "haar_twirl_map");
  check_same_dim(a, x, "haar_twirl_map");
  double dim = static_cast<double>(a.rows());
  if (a.rows() < 2) {
    throw std::domain_error("haar_twirl_map: undefined for D = 1");
  }
  Complex tr_ab = (a * b).trace();
  Complex tr_x = x.trace();
  DenseMatrix identity = DenseMatrix::Identity(a.rows(), a.rows());
  DenseMatrix traceless = x - (tr_x / dim) * identity;
  Complex unital = tr_ab * tr_x / (dim * dim);
  Complex contraction = (dim * a.trace() * b.trace() - tr_ab) / (dim * (dim * dim - 1.0));
  return unital * identity + contraction * traceless;
}

/// Weighted ensemble average sum_k w_k U_k^t A U_k X U_k^t B U_k.
/// Members must be unitary within kUnitaryTolerance; empty weights mean
/// the uniform distribution.
inline DenseMatrix ensemble_twirl_map(std::span<const DenseMatrix> ensemble,
                                      std::span<const double> weights,
                                      const DenseMatrix& a, const DenseMatrix& b,
                                      const DenseMatrix& x) {
  if (ensemble.empty()) throw std::invalid_argument("ensemble_twirl_map: empty ensemble");
  if (!weights.empty()) {
    if (weights.size() != ensemble.size()) {
      throw std::invalid_argument("ensemble_twirl_map: weight count mismatch");
    }
    double total = 0;
    for (double w : weights) {
      if (w < 0) throw std::invalid_argument("ensemble_twirl_map: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument(fmt::format("ensemble_twirl_map: weights sum to {}", total));
    }
  }
  Eigen::Index d = a.rows();
  DenseMatrix identity = DenseMatrix::Identity(d, d);
  DenseMatrix acc = DenseMatrix::Zero(d, d);
  double uniform = 1.0 / static_cast<double>(ensemble.size());
  for (size_t k = 0; k < ensemble.size(); ++k) {
    const DenseMatrix& u = ensemble[k];
    check_same_dim(u, a, "ensemble_twirl_map");
    double defect = (u.adjoint() * u - identity).cwiseAbs().maxCoeff();
    if (defect > kUnitaryTolerance) {
      throw std::invalid_argument(
          fmt::format("ensemble_twirl_map: member {} deviates from unitarity by {:.3e}", k, defect));
    }
    DenseMatrix au = u.adjoint() * a * u;
    DenseMatrix bu = u.adjoint() * b * u;
    acc += (weights.empty() ? uniform : weights[k]) * (au * x * bu);
  }
  return acc;
}

inline DenseMatrix ensemble_twirl_map(std::span<const DenseMatrix> ensemble,
                                      const DenseMatrix& a, const DenseMatrix& b,
                                      const DenseMatrix& x) {
  return ensemble_twirl_map(ensemble, {}, a, b, x);
}

/// Brute-force Pauli twirl (1/D^2) sum_k P_k A P_k X P_k B P_k by
/// explicit summation over all 4^n Pauli operators.
inline DenseMatrix brute_pauli_twirl(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& x) {
  check_square(a, "brute_pauli_twirl");
  check_same_dim(a, b, "brute_pauli_twirl");
  check_same_dim(a, x, "brute_pauli_twirl");
  int n = qubits_for_dim(a.rows());
  if (n > kMaxBruteForceQubits) {
    throw std::domain_error(
        fmt::format("brute_pauli_twirl: n={} exceeds capacity (n <= {})", n, kMaxBruteForceQubits));
  }
  uint64_t count = PauliLabel::label_count(n);
  DenseMatrix acc = DenseMatrix::Zero(a.rows(), a.cols());
  for (uint64_t idx = 0; idx < count; ++idx) {
    DenseMatrix p = to_dense(PauliLabel::from_index(n, idx));
    acc += p * a * p * x * p * b * p;
  }
  return acc / static_cast<double>(count);
}

inline void check_cptp(const KrausChannel& ch, const char* who) {
  if (!ch.trace_preserving || ch.cptp_defect() > kCptpTolerance) {
    throw std::invalid_argument(fmt::format("{}: channel is not CPTP", who));
  }
}

/// Haar-averaged survival probability of U|0> through the channel:
///   <F> = (sum_k |Tr A_k|^2 + D) / (D^2 + D),
/// which lies in [1/(D+1), 1].
inline double exact_average_fidelity(const KrausChannel& ch) {
  check_cptp(ch, "exact_average_fidelity");
  double dim = static_cast<double>(ch.dim());
  return (ch.trace_weight() + dim) / (dim * dim + dim);
}

struct ChannelTwirlResult {
  double p = 0;                 // depolarizing parameter
  KrausChannel depolarizing;    // rho -> p rho + (1-p) Tr(rho) I/D
};

/// Haar (equivalently Clifford) twirl of a CPTP channel: the result is
/// depolarizing with p = (sum_k |Tr A_k|^2 - 1) / (D^2 - 1).
inline ChannelTwirlResult haar_channel_twirl(const KrausChannel& ch) {
  check_cptp(ch, "haar_channel_twirl");
  double dim = static_cast<double>(ch.dim());
  if (ch.dim() < 2) throw std::domain_error("haar_channel_twirl: undefined for D = 1");
  double p = (ch.trace_weight() - 1.0) / (dim * dim - 1.0);
  return {p, depolarizing_channel(ch.n, p)};
}

/// Exact group twirl of a channel evaluated on one input:
///   (1/K) sum_U U^t Lambda(U rho U^t) U.
inline DenseMatrix enumerated_channel_twirl(std::span<const DenseMatrix> ensemble,
                                            const KrausChannel& ch, const DenseMatrix& rho) {
  DenseMatrix acc = DenseMatrix::Zero(rho.rows(), rho.cols());
  for (const DenseMatrix& u : ensemble) {
    acc += u.adjoint() * ch.apply(u * rho * u.adjoint()) * u;
  }
  return acc / static_cast<double>(ensemble.size());
}

// ---------------------------------------------------------------------------
// Superoperator (column-major vectorization) representations, used to
// evaluate whole-group channel twirls without re-applying the channel
// per input: vec(A X B) = (B^T kron A) vec(X).

inline DenseMatrix channel_superoperator(const KrausChannel& ch) {
  Eigen::Index d = ch.dim();
  DenseMatrix s = DenseMatrix::Zero(d * d, d * d);
  for (const DenseMatrix& a : ch.ops) s += kron(a.conjugate(), a);
  return s;
}

inline DenseMatrix conjugation_superoperator(const DenseMatrix& u) {
  return kron(u.conjugate(), u);
}

/// Superoperator of the twirled channel (1/K) sum_U U^t Lambda(U . U^t) U.
inline DenseMatrix twirled_channel_superoperator(std::span<const DenseMatrix> ensemble,
                                                 const KrausChannel& ch) {
  DenseMatrix s_channel = channel_superoperator(ch);
  Eigen::Index dd = s_channel.rows();
  DenseMatrix acc = DenseMatrix::Zero(dd, dd);
  for (const DenseMatrix& u : ensemble) {
    DenseMatrix s_u = conjugation_superoperator(u);
    acc += s_u.adjoint() * s_channel * s_u;
  }
  return acc / static_cast<double>(ensemble.size());
}

inline DenseMatrix apply_superoperator(const DenseMatrix& s, const DenseMatrix& rho) {
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
  Eigen::VectorXcd out = s * v;
  return Eigen::Map<const DenseMatrix>(out.data(), rho.rows(), rho.cols());
}

/// Pauli-channel weights of an arbitrary channel action, recovered from
/// the Pauli transfer eigenvalues lambda_a = Tr[P_a Lambda(P_a)]/D by
/// the symplectic character transform
///   w_b = (1/4^n) sum_a (-1)^{<a,b>} lambda_a.
/// Exact when the action really is a Pauli channel.
inline std::vector<double> pauli_channel_weights(
    const std::function<DenseMatrix(const DenseMatrix&)>& apply, int n) {
  uint64_t count = PauliLabel::label_count(n);
  std::vector<double> lambda(count);
  std::vector<PauliLabel> labels;
  labels.reserve(count);
  for (uint64_t idx = 0; idx < count; ++idx) {
    labels.push_back(PauliLabel::from_index(n, idx));
  }
  double dim = static_cast<double>(uint64_t{1} << n);
  for (uint64_t a = 0; a < count; ++a) {
    DenseMatrix pa = to_dense(labels[a]);
    lambda[a] = ((pa * apply(pa)).trace() / dim).real();
  }
  std::vector<double> weights(count);
  for (uint64_t b = 0; b < count; ++b) {
    double acc = 0;
    for (uint64_t a = 0; a < count; ++a) {
      acc += symplectic_product(labels[a], labels[b]) ? -lambda[a] : lambda[a];
    }
    weights[b] = acc / static_cast<double>(count);
  }
  return weights;
}

}  // namespace twirl
