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

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twirl/dense.hpp"

namespace twirl {

inline constexpr double kCptpTolerance = 1e-10;

/// A quantum channel rho -> sum_k A_k rho A_k^dagger in Kraus form.
/// When declared trace-preserving, sum_k A_k^dagger A_k = I is enforced
/// on construction within kCptpTolerance.
struct KrausChannel {
  int n = 0;
  bool trace_preserving = true;
  std::vector<DenseMatrix> ops;

  KrausChannel() = default;

  KrausChannel(int n_, std::vector<DenseMatrix> ops_, bool trace_preserving_ = true)
      : n(n_), trace_preserving(trace_preserving_), ops(std::move(ops_)) {
    Eigen::Index d = dense_dim(n);
    if (ops.empty()) throw std::invalid_argument("KrausChannel: no Kraus operators");
    for (const DenseMatrix& a : ops) {
      if (a.rows() != d || a.cols() != d) {
        throw std::invalid_argument(
            fmt::format("KrausChannel: operator is {}x{}, expected {}x{}", a.rows(), a.cols(), d, d));
      }
      if (!a.allFinite()) throw std::invalid_argument("KrausChannel: non-finite entries");
    }
    if (trace_preserving && cptp_defect() > kCptpTolerance) {
      throw std::invalid_argument(
          fmt::format("KrausChannel: declared trace-preserving but sum A^t A deviates from I by {:.3e}",
                      cptp_defect()));
    }
  }

  Eigen::Index dim() const { return dense_dim(n); }

  /// Max-norm deviation of sum_k A_k^dagger A_k from the identity.
  double cptp_defect() const {
    DenseMatrix s = DenseMatrix::Zero(dim(), dim());
    for (const DenseMatrix& a : ops) s += a.adjoint() * a;
    return (s - DenseMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  }

  DenseMatrix apply(const DenseMatrix& rho) const {
    DenseMatrix out = DenseMatrix::Zero(dim(), dim());
    for (const DenseMatrix& a : ops) out += a * rho * a.adjoint();
    return out;
  }

  /// sum_k |Tr A_k|^2, the quantity driving both the depolarizing
  /// parameter and the average fidelity.
  double trace_weight() const {
    double s = 0;
    for (const DenseMatrix& a : ops) s += std::norm(a.trace());
    return s;
  }
};

// ---------------------------------------------------------------------------
// Standard channels.

inline KrausChannel identity_channel(int n) {
  return KrausChannel(n, {DenseMatrix::Identity(dense_dim(n), dense_dim(n))});
}

inline KrausChannel unitary_channel(const DenseMatrix& u) {
  check_square(u, "unitary_channel");
  return KrausChannel(qubits_for_dim(u.rows()), {u});
}

/// Single-qubit dephasing: {sqrt(1-q) I, sqrt(q) Z}.
inline KrausChannel dephasing_channel(double q) {
  if (q < 0 || q > 1) throw std::domain_error("dephasing_channel: q outside [0, 1]");
  return KrausChannel(1, {std::sqrt(1.0 - q) * DenseMatrix::Identity(2, 2),
                          std::sqrt(q) * pauli_z_matrix()});
}

/// Single-qubit amplitude damping with decay probability gamma.
inline KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0 || gamma > 1) throw std::domain_error("amplitude_damping_channel: gamma outside [0, 1]");
  DenseMatrix k0 = (DenseMatrix(2, 2) << 1, 0, 0, std::sqrt(1.0 - gamma)).finished();
  DenseMatrix k1 = (DenseMatrix(2, 2) << 0, std::sqrt(gamma), 0, 0).finished();
  return KrausChannel(1, {std::move(k0), std::move(k1)});
}

/// The uniform Pauli channel rho -> (1/4^n) sum_a P_a rho P_a, which is
/// the completely depolarizing channel rho -> Tr(rho) I / D.
inline KrausChannel uniform_pauli_channel(int n) {
  std::vector<DenseMatrix> ops;
  double scale = 1.0 / static_cast<double>(uint64_t{1} << n);  // 1/sqrt(4^n)
  for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
    ops.push_back(scale * to_dense(PauliLabel::from_index(n, idx)));
  }
  return KrausChannel(n, std::move(ops));
}

/// Depolarizing channel rho -> p rho + (1-p) Tr(rho) I/D in Pauli Kraus
/// form: weight p + (1-p)/D^2 on the identity, (1-p)/D^2 elsewhere.
inline KrausChannel depolarizing_channel(int n, double p) {
  double d2 = static_cast<double>(uint64_t{1} << (2 * n));
  double off = (1.0 - p) / d2;
  double idw = p + off;
  if (off < -kCptpTolerance || idw < -kCptpTolerance) {
    throw std::domain_error(fmt::format("depolarizing_channel: p={} is not a channel at n={}", p, n));
  }
  std::vector<DenseMatrix> ops;
  for (uint64_t idx = 0; idx < PauliLabel::label_count(n); ++idx) {
    double w = idx == 0 ? idw : off;
    if (w <= 0) continue;
    ops.push_back(std::sqrt(w) * to_dense(PauliLabel::from_index(n, idx)));
  }
  return KrausChannel(n, std::move(ops));
}

/// Random CPTP channel: Gaussian Kraus candidates normalized by the
/// inverse square root of their completeness sum.
inline KrausChannel random_cptp_channel(int n, int kraus_count, Rng& rng) {
  if (kraus_count < 1) throw std::invalid_argument("random_cptp_channel: need at least one operator");
  Eigen::Index d = dense_dim(n);
  std::vector<DenseMatrix> raw;
  DenseMatrix total = DenseMatrix::Zero(d, d);
  for (int k = 0; k < kraus_count; ++k) {
    DenseMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.gauss(), rng.gauss());
    }
    total += g.adjoint() * g;
    raw.push_back(std::move(g));
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(total);
  DenseMatrix inv_sqrt = eig.eigenvectors() *
                         eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                         eig.eigenvectors().adjoint();
  std::vector<DenseMatrix> ops;
  ops.reserve(raw.size());
  for (const DenseMatrix& g : raw) ops.push_back(g * inv_sqrt);
  return KrausChannel(n, std::move(ops));
}

/// Composition after(before(rho)): Kraus products {B_j A_k}.
inline KrausChannel compose_channels(const KrausChannel& after, const KrausChannel& before) {
  if (after.n != before.n) {
    throw std::invalid_argument(fmt::format("compose_channels: n mismatch ({} vs {})", after.n, before.n));
  }
  std::vector<DenseMatrix> ops;
  ops.reserve(after.ops.size() * before.ops.size());
  for (const DenseMatrix& b : after.ops) {
    for (const DenseMatrix& a : before.ops) ops.push_back(b * a);
  }
  return KrausChannel(after.n, std::move(ops), after.trace_preserving && before.trace_preserving);
}

/// Extends a channel to act as the identity on `extra` appended qubits.
inline KrausChannel tensor_with_identity(const KrausChannel& ch, int extra) {
  if (extra < 0) throw std::invalid_argument("tensor_with_identity: negative qubit count");
  if (extra == 0) return ch;
  Eigen::Index pad = dense_dim(extra);
  std::vector<DenseMatrix> ops;
  ops.reserve(ch.ops.size());
  for (const DenseMatrix& a : ch.ops) {
    ops.push_back(kron(a, DenseMatrix::Identity(pad, pad)));
  }
  return KrausChannel(ch.n + extra, std::move(ops), ch.trace_preserving);
}

// ---------------------------------------------------------------------------
// Channel file format: a JSON document with the qubit count, a CPTP
// flag, and Kraus matrices as nested arrays of [re, im] pairs.

inline nlohmann::json channel_to_json(const KrausChannel& ch) {
  nlohmann::json kraus = nlohmann::json::array();
  for (const DenseMatrix& a : ch.ops) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        row.push_back({a(i, j).real(), a(i, j).imag()});
      }
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  return nlohmann::json{{"n", ch.n}, {"cptp", ch.trace_preserving}, {"kraus", std::move(kraus)}};
}

inline KrausChannel channel_from_json(const nlohmann::json& doc) {
  if (!doc.contains("n") || !doc.contains("kraus")) {
    throw std::invalid_argument("channel document: missing \"n\" or \"kraus\"");
  }
  int n = doc.at("n").get<int>();
  bool cptp = doc.value("cptp", true);
  Eigen::Index d = dense_dim(n);
  std::vector<DenseMatrix> ops;
  for (const auto& mat : doc.at("kraus")) {
    if (static_cast<Eigen::Index>(mat.size()) != d) {
      throw std::invalid_argument(fmt::format("channel document: Kraus matrix has {} rows, expected {}", mat.size(), d));
    }
    DenseMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& row = mat.at(i);
      if (static_cast<Eigen::Index>(row.size()) != d) {
        throw std::invalid_argument("channel document: ragged Kraus matrix");
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        const auto& entry = row.at(j);
        if (!entry.is_array() || entry.size() != 2) {
          throw std::invalid_argument("channel document: entries must be [re, im] pairs");
        }
        a(i, j) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
      }
    }
    ops.push_back(std::move(a));
  }
  return KrausChannel(n, std::move(ops), cptp);
}

inline KrausChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open channel file \"{}\"", path));
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(fmt::format("channel file \"{}\": {}", path, e.what()));
  }
  return channel_from_json(doc);
}

inline void save_channel(const KrausChannel& ch, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write channel file \"{}\"", path));
  out << channel_to_json(ch).dump(2) << '\n';
}

}  // namespace twirl
