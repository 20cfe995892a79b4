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

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "twirl/pauli_channel.hpp"

namespace twirl {

inline constexpr int kMaxChainQubits = 8;

/// One fully resolved sample of the seven-step basic procedure on n
/// qubits. Steps, in application order:
///   1. R^r on every qubit, exponents uniform over {0,1,2}.
///   2. CNOT(k -> 1) for each k in 2..n independently with prob 3/4.
///   3. H on qubit 1; R^r on qubits 2..n.
///   4. CNOT layer as in step 2.
///   5. H on qubit 1; R^r on qubits 2..n.
///   6. S on qubit 1 with prob 1/2.
///   7. CNOT layer as in step 2.
/// Mask bit k-1 corresponds to control qubit k; bit 0 is always clear.
struct BasicProcedureInstance {
  int n = 0;
  std::vector<uint8_t> step1_r;  // size n, qubit k at index k-1
  BitVec step2_mask;
  std::vector<uint8_t> step3_r;  // size n-1, qubit k at index k-2
  BitVec step4_mask;
  std::vector<uint8_t> step5_r;  // size n-1
  bool step6_s = false;
  BitVec step7_mask;

  /// Realized gates: one per nonzero R exponent (R and R^2 each count
  /// one), one per CNOT mask bit, the two mandatory H gates, and S when
  /// the coin came up. At most 6n - 2.
  int gate_count() const {
    auto nonzero = [](const std::vector<uint8_t>& v) {
      int c = 0;
      for (uint8_t r : v) c += r != 0;
      return c;
    };
    return nonzero(step1_r) + step2_mask.popcount() + 1 + nonzero(step3_r) +
           step4_mask.popcount() + 1 + nonzero(step5_r) + (step6_s ? 1 : 0) +
           step7_mask.popcount();
  }

  /// Flattened gate sequence in application order. An R^2 exponent
  /// expands to two R lines.
  std::vector<Gate> to_gates() const {
    std::vector<Gate> gates;
    auto push_r = [&](int qubit, uint8_t reps) {
      for (uint8_t i = 0; i < reps; ++i) gates.push_back(Gate::r(qubit));
    };
    auto push_cnots = [&](const BitVec& mask) {
      for (int k = 2; k <= n; ++k) {
        if (mask.get(k - 1)) gates.push_back(Gate::cnot(k, 1));
      }
    };
    for (int k = 1; k <= n; ++k) push_r(k, step1_r[k - 1]);
    push_cnots(step2_mask);
    gates.push_back(Gate::h(1));
    for (int k = 2; k <= n; ++k) push_r(k, step3_r[k - 2]);
    push_cnots(step4_mask);
    gates.push_back(Gate::h(1));
    for (int k = 2; k <= n; ++k) push_r(k, step5_r[k - 2]);
    if (step6_s) gates.push_back(Gate::s(1));
    push_cnots(step7_mask);
    return gates;
  }
};

inline void check_procedure_n(int n) {
  if (n < 2) {
    throw std::domain_error(fmt::format(
        "basic procedure: n={} is not supported (n >= 2); use the exact "
        "Clifford enumeration for a single qubit", n));
  }
}

inline BasicProcedureInstance sample_basic_procedure(int n, Rng& rng) {
  check_procedure_n(n);
  BasicProcedureInstance inst;
  inst.n = n;
  auto sample_exponents = [&](int count) {
    std::vector<uint8_t> v(count);
    for (auto& r : v) r = static_cast<uint8_t>(rng.trit());
    return v;
  };
  auto sample_mask = [&] {
    BitVec m(n);
    for (int k = 2; k <= n; ++k) m.set(k - 1, rng.bernoulli_three_quarters());
    return m;
  };
  inst.step1_r = sample_exponents(n);
  inst.step2_mask = sample_mask();
  inst.step3_r = sample_exponents(n - 1);
  inst.step4_mask = sample_mask();
  inst.step5_r = sample_exponents(n - 1);
  inst.step6_s = rng.coin();
  inst.step7_mask = sample_mask();
  return inst;
}

namespace detail {

// Word-parallel label updates shared by trajectory sampling.

/// R on every qubit in the mask: (x, z) -> (z, x^z).
inline void apply_r_masked(BitVec& x, BitVec& z, const BitVec& mask) {
  for (int w = 0; w < x.word_count(); ++w) {
    uint64_t m = mask.word(w);
    uint64_t xw = x.word(w), zw = z.word(w);
    x.word(w) = (xw & ~m) | (zw & m);
    z.word(w) = (zw & ~m) | ((xw ^ zw) & m);
  }
}

/// Simultaneous CNOT(k -> 1) for every control k in the mask:
/// x_1 ^= parity(x & mask); z_k ^= z_1 for masked k.
inline void apply_cnot_layer(BitVec& x, BitVec& z, const BitVec& mask) {
  int parity = BitVec::and_parity(x, mask);
  if (z.get(0)) {
    for (int w = 0; w < z.word_count(); ++w) z.word(w) ^= mask.word(w);
  }
  if (parity) x.flip(0);
}

inline void apply_h_first(BitVec& x, BitVec& z) {
  bool xb = x.get(0), zb = z.get(0);
  x.set(0, zb);
  z.set(0, xb);
}

inline void apply_s_first(BitVec& x, BitVec& z) {
  if (x.get(0)) z.flip(0);
}

/// Masks of qubits getting at least one R and of those getting two.
inline std::pair<BitVec, BitVec> r_masks(int n, const std::vector<uint8_t>& exponents,
                                         int first_qubit) {
  BitVec once(n), twice(n);
  for (size_t i = 0; i < exponents.size(); ++i) {
    int bit = first_qubit - 1 + static_cast<int>(i);
    if (exponents[i] != 0) once.set(bit, true);
    if (exponents[i] == 2) twice.set(bit, true);
  }
  return {std::move(once), std::move(twice)};
}

}  // namespace detail

/// Conjugates a label through one procedure instance, steps applied in
/// order 1 -> 7 with the phase-free gate rules. A bijection on labels
/// that fixes the identity.
inline PauliLabel conjugate_label(const BasicProcedureInstance& inst, PauliLabel a) {
  if (a.n != inst.n) {
    throw std::invalid_argument(
        fmt::format("conjugate_label: label has n={}, instance n={}", a.n, inst.n));
  }
  BitVec& x = a.x;
  BitVec& z = a.z;
  auto r_step = [&](const std::vector<uint8_t>& exponents, int first_qubit) {
    auto [once, twice] = detail::r_masks(inst.n, exponents, first_qubit);
    detail::apply_r_masked(x, z, once);
    detail::apply_r_masked(x, z, twice);
  };
  r_step(inst.step1_r, 1);
  detail::apply_cnot_layer(x, z, inst.step2_mask);
  detail::apply_h_first(x, z);
  r_step(inst.step3_r, 2);
  detail::apply_cnot_layer(x, z, inst.step4_mask);
  detail::apply_h_first(x, z);
  r_step(inst.step5_r, 2);
  if (inst.step6_s) detail::apply_s_first(x, z);
  detail::apply_cnot_layer(x, z, inst.step7_mask);
  return a;
}

/// Fresh instances per repetition folded over the start label; O(n)
/// work per repetition.
inline PauliLabel sample_trajectory(int n, int repetitions, PauliLabel start, Rng& rng) {
  check_procedure_n(n);
  if (start.n != n) throw std::invalid_argument("sample_trajectory: start label dimension mismatch");
  for (int r = 0; r < repetitions; ++r) {
    start = conjugate_label(sample_basic_procedure(n, rng), std::move(start));
  }
  return start;
}

/// Per-repetition lower bound on the probability of a very good
/// execution: (1/2)(1 - (1/4)^(n-1)).
inline double very_good_probability(int n) {
  if (n < 1) throw std::domain_error("very_good_probability: n must be positive");
  return 0.5 * (1.0 - std::pow(0.25, n - 1));
}

/// Total variation distance between the conditional non-identity
/// distribution and uniform over the 4^n - 1 non-identity labels; 0 by
/// convention when all mass sits on the identity.
inline double tvd_to_uniform_nonidentity(const PauliDistribution& d) {
  double nonidentity = 1.0 - d.identity_weight();
  if (nonidentity <= 0) return 0.0;
  double target = 1.0 / static_cast<double>(d.weights.size() - 1);
  double acc = 0;
  for (size_t i = 1; i < d.weights.size(); ++i) {
    acc += std::abs(d.weights[i] / nonidentity - target);
  }
  return 0.5 * acc;
}

// ---------------------------------------------------------------------------
// Exact label-distribution dynamics. Each random primitive of the
// procedure becomes a stochastic map applied to the distribution
// vector, so one repetition costs O(n 4^n) instead of enumerating the
// joint randomness. All maps fix the identity label; its weight is
// copied through untouched, so it is conserved exactly.

struct ChainState {
  int n = 0;
  PauliDistribution dist;

  ChainState() = default;
  ChainState(int n_, PauliDistribution d) : n(n_), dist(std::move(d)) {
    check_procedure_n(n);
    if (n > kMaxChainQubits) {
      throw std::domain_error(fmt::format("ChainState: n={} exceeds capacity (n <= {})", n, kMaxChainQubits));
    }
    if (dist.n != n) throw std::invalid_argument("ChainState: distribution dimension mismatch");
  }

  static ChainState from_label(const PauliLabel& start) {
    return ChainState(start.n, PauliDistribution::point_mass(start));
  }
};

namespace detail {

// Index-level bit maps; index = (x << n) | z, so qubit k has its x bit
// at position n+k-1 and its z bit at position k-1.

inline uint64_t chain_r(uint64_t idx, int n, int qubit) {
  int zb = qubit - 1, xb = n + qubit - 1;
  uint64_t x = (idx >> xb) & 1, z = (idx >> zb) & 1;
  idx &= ~((uint64_t{1} << xb) | (uint64_t{1} << zb));
  idx |= z << xb;
  idx |= (x ^ z) << zb;
  return idx;
}

inline uint64_t chain_cnot(uint64_t idx, int n, int control) {
  uint64_t xc = (idx >> (n + control - 1)) & 1;
  uint64_t z1 = idx & 1;
  if (xc) idx ^= uint64_t{1} << n;            // x_1 ^= x_c
  if (z1) idx ^= uint64_t{1} << (control - 1);  // z_c ^= z_1
  return idx;
}

inline uint64_t chain_h1(uint64_t idx, int n) {
  uint64_t x1 = (idx >> n) & 1, z1 = idx & 1;
  idx &= ~((uint64_t{1} << n) | uint64_t{1});
  idx |= z1 << n;
  idx |= x1;
  return idx;
}

inline uint64_t chain_s1(uint64_t idx, int n) {
  if ((idx >> n) & 1) idx ^= 1;
  return idx;
}

// Gather-form stochastic maps; `next` is overwritten. The identity
// label is pinned to its previous weight, which is exact because every
// primitive fixes label 0 and no other label maps onto it.

inline void chain_r_average(const std::vector<double>& cur, std::vector<double>& next,
                            int n, int qubit) {
  for (uint64_t idx = 0; idx < cur.size(); ++idx) {
    uint64_t r1 = chain_r(idx, n, qubit);
    uint64_t r2 = chain_r(r1, n, qubit);
    next[idx] = (cur[idx] + cur[r1] + cur[r2]) / 3.0;
  }
  next[0] = cur[0];
}

inline void chain_cnot_average(const std::vector<double>& cur, std::vector<double>& next,
                               int n, int control) {
  for (uint64_t idx = 0; idx < cur.size(); ++idx) {
    next[idx] = 0.25 * cur[idx] + 0.75 * cur[chain_cnot(idx, n, control)];
  }
  next[0] = cur[0];
}

inline void chain_h1_map(const std::vector<double>& cur, std::vector<double>& next, int n) {
  for (uint64_t idx = 0; idx < cur.size(); ++idx) {
    next[idx] = cur[chain_h1(idx, n)];
  }
  next[0] = cur[0];
}

inline void chain_s1_average(const std::vector<double>& cur, std::vector<double>& next, int n) {
  for (uint64_t idx = 0; idx < cur.size(); ++idx) {
    next[idx] = 0.5 * (cur[idx] + cur[chain_s1(idx, n)]);
  }
  next[0] = cur[0];
}

}  // namespace detail

/// Pushes the distribution through `repetitions` full procedure
/// averages. Total mass and the identity weight are conserved exactly.
inline ChainState evolve_exact(ChainState state, int repetitions) {
  int n = state.n;
  std::vector<double> cur = std::move(state.dist.weights);
  std::vector<double> buf(cur.size());
  auto step = [&](auto&& map) {
    map(cur, buf);
    std::swap(cur, buf);
  };
  for (int rep = 0; rep < repetitions; ++rep) {
    for (int k = 1; k <= n; ++k) {
      step([&](const auto& c, auto& nx) { detail::chain_r_average(c, nx, n, k); });
    }
    auto cnot_layer = [&] {
      for (int k = 2; k <= n; ++k) {
        step([&](const auto& c, auto& nx) { detail::chain_cnot_average(c, nx, n, k); });
      }
    };
    auto h_and_r = [&] {
      step([&](const auto& c, auto& nx) { detail::chain_h1_map(c, nx, n); });
      for (int k = 2; k <= n; ++k) {
        step([&](const auto& c, auto& nx) { detail::chain_r_average(c, nx, n, k); });
      }
    };
    cnot_layer();   // step 2
    h_and_r();      // step 3
    cnot_layer();   // step 4
    h_and_r();      // step 5
    step([&](const auto& c, auto& nx) { detail::chain_s1_average(c, nx, n); });  // step 6
    cnot_layer();   // step 7
  }
  state.dist.weights = std::move(cur);
  return state;
}

// ---------------------------------------------------------------------------
// Design circuits: a uniformly random Pauli prefix layer followed by
// sampled basic-procedure repetitions. This is the random unitary used
// by the moment test and the fidelity protocol.

struct DesignCircuit {
  int n = 0;
  PauliLabel pauli_prefix;
  std::vector<BasicProcedureInstance> repetitions;

  /// Pauli-layer gates (non-identity components) plus the realized
  /// gate count of every repetition.
  int gate_count() const {
    int c = pauli_prefix.weight();
    for (const auto& inst : repetitions) c += inst.gate_count();
    return c;
  }

  std::vector<Gate> to_gates() const {
    std::vector<Gate> gates;
    for (const auto& inst : repetitions) {
      std::vector<Gate> g = inst.to_gates();
      gates.insert(gates.end(), g.begin(), g.end());
    }
    return gates;
  }

  /// Circuit dump: a "PAULI <label>" line for the prefix layer, then
  /// one gate per line.
  std::string to_text() const {
    std::string out = fmt::format("PAULI {}\n", pauli_prefix.str());
    out += gates_to_text(to_gates());
    return out;
  }

  /// Dense unitary; the prefix layer is applied first.
  DenseMatrix to_dense() const {
    std::vector<Gate> gates = to_gates();
    return unitary_from_gates(n, gates) * twirl::to_dense(pauli_prefix);
  }

  /// Label conjugation through the whole circuit (the prefix layer acts
  /// trivially on labels).
  PauliLabel conjugate(PauliLabel a) const {
    for (const auto& inst : repetitions) a = conjugate_label(inst, std::move(a));
    return a;
  }
};

inline DesignCircuit sample_design_unitary(int n, int repetitions, Rng& rng) {
  check_procedure_n(n);
  if (repetitions < 0) throw std::invalid_argument("sample_design_unitary: negative repetition count");
  DesignCircuit c;
  c.n = n;
  c.pauli_prefix = random_label(n, rng);
  c.repetitions.reserve(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    c.repetitions.push_back(sample_basic_procedure(n, rng));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Convergence measurement.

/// Expected realized gates of one procedure repetition.
inline double expected_gate_count(int n) {
  check_procedure_n(n);
  return (2.0 / 3.0) * n + (9.0 / 4.0) * (n - 1) + (4.0 / 3.0) * (n - 1) + 2.5;
}

struct ConvergenceReport {
  int n = 0;
  int repetitions = 0;
  double very_good_prob = 0;
  std::vector<double> tvd_per_rep;             // after repetition r (1-based)
  std::vector<double> identity_weight_per_rep;
  std::vector<double> gate_count_mean_per_rep;
  /// Smallest c with tvd(r) <= (1 - very_good_prob)^r + c / 4^n for
  /// every measured r.
  double fitted_c = 0;
  /// Per-repetition contraction factor from a least-squares fit of
  /// log tvd against r (0 when too few positive points).
  double fitted_rate = 0;
};

namespace detail {

inline void fit_convergence(ConvergenceReport& report) {
  double envelope_base = 1.0 - report.very_good_prob;
  double four_n = std::pow(4.0, report.n);
  double c = 0;
  for (size_t i = 0; i < report.tvd_per_rep.size(); ++i) {
    double r = static_cast<double>(i + 1);
    double excess = report.tvd_per_rep[i] - std::pow(envelope_base, r);
    c = std::max(c, excess * four_n);
  }
  report.fitted_c = c;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < report.tvd_per_rep.size(); ++i) {
    if (report.tvd_per_rep[i] <= 1e-13) continue;
    double xr = static_cast<double>(i + 1);
    double yr = std::log(report.tvd_per_rep[i]);
    sx += xr;
    sy += yr;
    sxx += xr * xr;
    sxy += xr * yr;
    ++m;
  }
  if (m >= 2 && m * sxx - sx * sx > 0) {
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    report.fitted_rate = std::exp(slope);
  }
}

}  // namespace detail

/// Runs the exact chain from a point mass and records the tvd after
/// each repetition.
inline ConvergenceReport exact_convergence(const PauliLabel& start, int repetitions) {
  ChainState state = ChainState::from_label(start);
  ConvergenceReport report;
  report.n = start.n;
  report.repetitions = repetitions;
  report.very_good_prob = very_good_probability(start.n);
  for (int r = 1; r <= repetitions; ++r) {
    state = evolve_exact(std::move(state), 1);
    report.tvd_per_rep.push_back(tvd_to_uniform_nonidentity(state.dist));
    report.identity_weight_per_rep.push_back(state.dist.identity_weight());
    report.gate_count_mean_per_rep.push_back(expected_gate_count(start.n));
  }
  detail::fit_convergence(report);
  return report;
}

/// Trajectory-mode convergence for any n >= 2. Full label histograms
/// are unavailable at scale, so the tvd column reports the maximum over
/// qubits of the per-qubit letter-marginal tvd against the marginal of
/// the uniform non-identity distribution.
struct TrajectoryConvergence {
  int n = 0;
  int repetitions = 0;
  long trajectories = 0;
  std::vector<double> max_marginal_tvd_per_rep;
  std::vector<double> identity_frequency_per_rep;
  std::vector<double> gate_count_mean_per_rep;
};

inline TrajectoryConvergence trajectory_convergence(int n, int repetitions,
                                                    const PauliLabel& start,
                                                    long trajectories, uint64_t root_seed) {
  check_procedure_n(n);
  if (trajectories < 1) throw std::invalid_argument("trajectory_convergence: need at least one trajectory");
  // counts[rep][qubit][letter]
  std::vector<std::vector<std::array<long, 4>>> counts(
      repetitions, std::vector<std::array<long, 4>>(n, {0, 0, 0, 0}));
  std::vector<long> identity_hits(repetitions, 0);
  std::vector<long> gate_totals(repetitions, 0);

  for (long t = 0; t < trajectories; ++t) {
    Rng rng = Rng::stream(root_seed, static_cast<uint64_t>(t));
    PauliLabel label = start;
    for (int rep = 0; rep < repetitions; ++rep) {
      BasicProcedureInstance inst = sample_basic_procedure(n, rng);
      gate_totals[rep] += inst.gate_count();
      label = conjugate_label(inst, std::move(label));
      if (label.is_identity()) ++identity_hits[rep];
      for (int q = 1; q <= n; ++q) {
        int letter = (label.x.get(q - 1) ? 1 : 0) | (label.z.get(q - 1) ? 2 : 0);
        ++counts[rep][q - 1][letter];  // 0=I, 1=X, 3=Y, 2=Z (index by bits)
      }
    }
  }

  double four_nm1 = std::pow(4.0, n - 1);
  double nonidentity_total = 4.0 * four_nm1 - 1.0;
  double p_i = (four_nm1 - 1.0) / nonidentity_total;
  double p_other = four_nm1 / nonidentity_total;

  TrajectoryConvergence out;
  out.n = n;
  out.repetitions = repetitions;
  out.trajectories = trajectories;
  for (int rep = 0; rep < repetitions; ++rep) {
    double worst = 0;
    for (int q = 0; q < n; ++q) {
      double tvd = 0;
      for (int letter = 0; letter < 4; ++letter) {
        double freq = static_cast<double>(counts[rep][q][letter]) / trajectories;
        tvd += std::abs(freq - (letter == 0 ? p_i : p_other));
      }
      worst = std::max(worst, 0.5 * tvd);
    }
    out.max_marginal_tvd_per_rep.push_back(worst);
    out.identity_frequency_per_rep.push_back(static_cast<double>(identity_hits[rep]) / trajectories);
    out.gate_count_mean_per_rep.push_back(static_cast<double>(gate_totals[rep]) / trajectories);
  }
  return out;
}

}  // namespace twirl
