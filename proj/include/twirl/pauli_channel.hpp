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

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "twirl/oracle.hpp"

namespace twirl {

/// Dense distribution vectors over 4^n labels stay affordable up to
/// here (4^10 doubles = 8 MiB).
inline constexpr int kMaxDistributionQubits = 10;

inline constexpr double kDistributionTolerance = 1e-10;

/// A weight vector over the 4^n Pauli labels, indexed by
/// PauliLabel::index. For twirled CPTP channels this is a probability
/// distribution: the channel rho -> sum_a w_a P_a rho P_a.
struct PauliDistribution {
  int n = 0;
  std::vector<double> weights;

  PauliDistribution() = default;

  explicit PauliDistribution(int n_) : n(n_) {
    check_capacity(n);
    weights.assign(PauliLabel::label_count(n), 0.0);
  }

  static PauliDistribution point_mass(const PauliLabel& label) {
    PauliDistribution d(label.n);
    d.weights[label.index()] = 1.0;
    return d;
  }

  /// Zero identity weight, equal weight on every non-identity label.
  static PauliDistribution uniform_nonidentity(int n) {
    PauliDistribution d(n);
    double w = 1.0 / static_cast<double>(PauliLabel::label_count(n) - 1);
    for (size_t i = 1; i < d.weights.size(); ++i) d.weights[i] = w;
    return d;
  }

  static void check_capacity(int n) {
    if (n < 1 || n > kMaxDistributionQubits) {
      throw std::domain_error(
          fmt::format("PauliDistribution: n={} outside 1..{}", n, kMaxDistributionQubits));
    }
  }

  double identity_weight() const { return weights[0]; }

  double total() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }

  double weight(const PauliLabel& label) const {
    if (label.n != n) throw std::invalid_argument("PauliDistribution: label dimension mismatch");
    return weights[label.index()];
  }

  /// Throws unless the weights form a probability distribution.
  void validate(double tol = kDistributionTolerance) const {
    for (double w : weights) {
      if (w < -tol) throw std::invalid_argument(fmt::format("PauliDistribution: negative weight {}", w));
    }
    if (std::abs(total() - 1.0) > tol) {
      throw std::invalid_argument(fmt::format("PauliDistribution: total mass {} != 1", total()));
    }
  }

  bool operator==(const PauliDistribution&) const = default;
};

/// Pauli twirl of a CPTP channel: the Pauli channel with
/// w_b = sum_k |alpha_{k,b}|^2 where alpha_k is the Pauli expansion of
/// Kraus operator A_k. Dense expansion bounds this to small n.
inline PauliDistribution pauli_twirl_channel(const KrausChannel& ch) {
  check_cptp(ch, "pauli_twirl_channel");
  if (ch.n > kMaxBruteForceQubits) {
    throw std::domain_error(fmt::format(
        "pauli_twirl_channel: n={} exceeds the dense expansion capacity (n <= {})",
        ch.n, kMaxBruteForceQubits));
  }
  PauliDistribution out(ch.n);
  for (const DenseMatrix& a : ch.ops) {
    PauliCoefficients coeff = expand(a);
    for (size_t idx = 0; idx < out.weights.size(); ++idx) {
      out.weights[idx] += std::norm(coeff.alpha[idx]);
    }
  }
  out.validate();
  return out;
}

/// Exact effect of a full Clifford twirl on a Pauli channel: the
/// identity weight is untouched and the remaining mass is spread
/// uniformly over the 4^n - 1 non-identity labels.
inline PauliDistribution clifford_uniformize(const PauliDistribution& d) {
  PauliDistribution out(d.n);
  double identity = d.identity_weight();
  double rest = 0;
  for (size_t i = 1; i < d.weights.size(); ++i) rest += d.weights[i];
  double w = rest / static_cast<double>(d.weights.size() - 1);
  out.weights[0] = identity;
  for (size_t i = 1; i < out.weights.size(); ++i) out.weights[i] = w;
  return out;
}

/// Depolarizing parameter of the Clifford/Haar-twirled channel:
/// p = (D^2 w_identity - 1) / (D^2 - 1).
inline double depolarizing_parameter(const PauliDistribution& d) {
  double d2 = static_cast<double>(d.weights.size());
  return (d2 * d.identity_weight() - 1.0) / (d2 - 1.0);
}

/// Kraus form {sqrt(w_a) P_a} of a Pauli channel.
inline KrausChannel pauli_channel_kraus(const PauliDistribution& d) {
  d.validate();
  std::vector<DenseMatrix> ops;
  for (size_t idx = 0; idx < d.weights.size(); ++idx) {
    if (d.weights[idx] <= 0) continue;
    ops.push_back(std::sqrt(d.weights[idx]) * to_dense(PauliLabel::from_index(d.n, idx)));
  }
  return KrausChannel(d.n, std::move(ops));
}

// ---------------------------------------------------------------------------
// Sparse Pauli-channel text format: lines of "<label> <weight>", e.g.
// "IZ 0.5". Unlisted labels are zero. '#' starts a comment.

struct SparsePauliChannel {
  int n = 0;
  std::vector<std::pair<PauliLabel, double>> entries;

  /// Dense conversion; bounded by the distribution capacity.
  PauliDistribution to_distribution() const {
    PauliDistribution d(n);
    for (const auto& [label, w] : entries) d.weights[label.index()] += w;
    return d;
  }
};

inline constexpr double kSparseNormalizationTolerance = 1e-9;

inline SparsePauliChannel parse_sparse_pauli_channel(std::istream& in) {
  SparsePauliChannel ch;
  std::string line;
  double total = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string label_text;
    if (!(ls >> label_text)) continue;
    double w;
    if (!(ls >> w)) {
      throw std::invalid_argument(fmt::format("sparse channel line {}: missing weight", lineno));
    }
    std::string rest;
    if (ls >> rest) {
      throw std::invalid_argument(fmt::format("sparse channel line {}: trailing tokens", lineno));
    }
    PauliLabel label = PauliLabel::from_string(label_text);
    if (ch.entries.empty()) {
      ch.n = label.n;
    } else if (label.n != ch.n) {
      throw std::invalid_argument(
          fmt::format("sparse channel line {}: label length {} != {}", lineno, label.n, ch.n));
    }
    if (w < 0) {
      throw std::invalid_argument(fmt::format("sparse channel line {}: negative weight", lineno));
    }
    total += w;
    ch.entries.emplace_back(std::move(label), w);
  }
  if (ch.entries.empty()) throw std::invalid_argument("sparse channel: no entries");
  if (std::abs(total - 1.0) > kSparseNormalizationTolerance) {
    throw std::invalid_argument(
        fmt::format("sparse channel: weights sum to {:.12g}, expected 1", total));
  }
  return ch;
}

inline SparsePauliChannel load_sparse_pauli_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open sparse channel file \"{}\"", path));
  return parse_sparse_pauli_channel(in);
}

inline std::string format_sparse_pauli_channel(const PauliDistribution& d, double cutoff = 0.0) {
  std::string out;
  for (size_t idx = 0; idx < d.weights.size(); ++idx) {
    if (d.weights[idx] > cutoff) {
      out += fmt::format("{} {:.17g}\n", PauliLabel::from_index(d.n, idx).str(), d.weights[idx]);
    }
  }
  return out;
}

}  // namespace twirl
