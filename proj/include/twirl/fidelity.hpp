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

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twirl/design.hpp"

namespace twirl {

inline constexpr int kMaxExperimentQubits = 10;

/// The channel whose average fidelity is being estimated. For a noisy
/// gate implementation, the composition U_g^t E(U_g rho U_g^t) U_g
/// folds the target unitary into the noise map.
struct NoiseScenario {
  KrausChannel channel;
  std::string id = "channel";

  static NoiseScenario from_channel(KrausChannel ch, std::string id = "channel") {
    return {std::move(ch), std::move(id)};
  }

  /// Target gate U_g with noise map E, composed so that a noiseless E
  /// gives the identity scenario regardless of U_g.
  static NoiseScenario gate_with_noise(const DenseMatrix& u_gate, const KrausChannel& noise,
                                       std::string id = "gate") {
    check_square(u_gate, "NoiseScenario");
    if (u_gate.rows() != noise.dim()) {
      throw std::invalid_argument("NoiseScenario: gate and noise dimensions differ");
    }
    std::vector<DenseMatrix> ops;
    ops.reserve(noise.ops.size());
    for (const DenseMatrix& b : noise.ops) {
      ops.push_back(u_gate.adjoint() * b * u_gate);
    }
    return {KrausChannel(noise.n, std::move(ops), noise.trace_preserving), std::move(id)};
  }
};

/// Draws one random unitary per experiment.
using DesignSampler = std::function<DenseMatrix(Rng&)>;

/// Uniform over the full enumerated Clifford group (n <= 2).
inline DesignSampler exact_design_sampler(int n) {
  auto ensemble = std::make_shared<std::vector<DenseMatrix>>(clifford_dense_ensemble(n));
  return [ensemble](Rng& rng) -> DenseMatrix {
    return (*ensemble)[rng.below(ensemble->size())];
  };
}

/// Fresh sample of the approximate design: random Pauli layer plus
/// `repetitions` basic procedures, as a dense unitary (n >= 2).
inline DesignSampler approx_design_sampler(int n, int repetitions) {
  check_procedure_n(n);
  check_dense_capacity(n);
  return [n, repetitions](Rng& rng) -> DenseMatrix {
    return sample_design_unitary(n, repetitions, rng).to_dense();
  };
}

/// One run of the protocol: prepare |0>, apply a drawn U, the channel,
/// then U^t, and measure the survival of |0>. Returns the measurement
/// bit, which is 1 with probability <0| U^t Lambda(U |0><0| U^t) U |0>.
inline int run_experiment(const NoiseScenario& scenario, const DesignSampler& sampler, Rng& rng) {
  const KrausChannel& ch = scenario.channel;
  check_cptp(ch, "run_experiment");
  if (ch.n > kMaxExperimentQubits) {
    throw std::domain_error(
        fmt::format("run_experiment: n={} exceeds capacity (n <= {})", ch.n, kMaxExperimentQubits));
  }
  DenseMatrix u = sampler(rng);
  if (u.rows() != ch.dim()) {
    throw std::invalid_argument("run_experiment: design dimension does not match the channel");
  }
  Eigen::VectorXcd prepared = u.col(0);  // U |0>
  DenseMatrix evolved = ch.apply(prepared * prepared.adjoint());
  double p = (prepared.adjoint() * evolved * prepared)(0, 0).real();
  p = std::clamp(p, 0.0, 1.0);
  // Snap away survival probabilities that differ from a certain outcome
  // only by arithmetic rounding.
  if (p > 1.0 - 1e-12) p = 1.0;
  if (p < 1e-12) p = 0.0;
  return rng.bernoulli(p) ? 1 : 0;
}

inline double hoeffding_radius(long shots, double confidence_level) {
  if (shots < 1) throw std::domain_error("hoeffding_radius: need at least one shot");
  if (confidence_level <= 0 || confidence_level >= 1) {
    throw std::domain_error("hoeffding_radius: confidence level outside (0, 1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence_level)) / (2.0 * static_cast<double>(shots)));
}

struct FidelityEstimate {
  double mean = 0;
  long shots = 0;
  double confidence_radius = 0;
  double confidence_level = 0;
};

/// Monte-Carlo estimate of the average fidelity: the success fraction
/// over independent experiments, with a two-sided Hoeffding radius.
inline FidelityEstimate estimate_average_fidelity(const NoiseScenario& scenario, long shots,
                                                  const DesignSampler& sampler, Rng& rng,
                                                  double confidence_level = 0.99) {
  if (shots < 1) throw std::domain_error("estimate_average_fidelity: need at least one shot");
  long successes = 0;
  for (long s = 0; s < shots; ++s) {
    successes += run_experiment(scenario, sampler, rng);
  }
  FidelityEstimate est;
  est.mean = static_cast<double>(successes) / static_cast<double>(shots);
  est.shots = shots;
  est.confidence_level = confidence_level;
  est.confidence_radius = hoeffding_radius(shots, confidence_level);
  return est;
}

struct FidelityPair {
  double gate = 0;
  double entanglement = 0;
};

/// Inverts <F> = (D F_g + 1)/(D + 1) = (D F_e + 1)/(D + 1).
inline FidelityPair convert_fidelities(double f_avg, double dim) {
  if (dim < 2) throw std::domain_error("convert_fidelities: D must be at least 2");
  double lo = 1.0 / (dim + 1.0);
  if (f_avg < lo - 1e-12 || f_avg > 1.0 + 1e-12) {
    throw std::domain_error(
        fmt::format("convert_fidelities: f_avg={} outside [{}, 1]", f_avg, lo));
  }
  double f = (f_avg * (dim + 1.0) - 1.0) / dim;
  return {f, f};
}

/// Smallest shot count N with 2 exp(-2 N delta^2) <= 1 - level.
/// Independent of the system dimension.
inline long required_shots(double precision, double confidence_level) {
  if (precision <= 0 || precision >= 1) throw std::domain_error("required_shots: precision outside (0, 1)");
  if (confidence_level <= 0 || confidence_level >= 1) {
    throw std::domain_error("required_shots: confidence level outside (0, 1)");
  }
  double bound = std::log(2.0 / (1.0 - confidence_level)) / (2.0 * precision * precision);
  return static_cast<long>(std::ceil(bound));
}

/// Machine-readable record of one estimation run.
inline nlohmann::json result_record(const NoiseScenario& scenario, const std::string& design,
                                    int repetitions, const FidelityEstimate& est,
                                    std::optional<double> exact_value, uint64_t seed) {
  nlohmann::json doc{
      {"n", scenario.channel.n},
      {"channel_id", scenario.id},
      {"design", design},
      {"repetitions", repetitions},
      {"shots", est.shots},
      {"mean", est.mean},
      {"confidence_radius", est.confidence_radius},
      {"confidence_level", est.confidence_level},
      {"seed", seed},
  };
  if (exact_value) doc["exact_value"] = *exact_value;
  return doc;
}

}  // namespace twirl
