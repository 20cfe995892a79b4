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

// Command-line front end: design verification, channel twirling,
// convergence sweeps, and fidelity experiments. Every randomized
// command is reproducible from --seed; per-unit streams are split from
// the root seed by counter, so enlarging a sweep never perturbs the
// draws of earlier units.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twirl/twirl.hpp"

namespace {

using nlohmann::json;
using namespace twirl;

struct RunConfig {
  int n = 1;
  uint64_t seed = 0;
  long shots = 10000;
  int reps = 10;
  int trials = 10;
  long samples = 20000;
  long trajectories = 10000;
  std::string channel_path;
  std::string pauli_path;
  std::string start = "X1";
  std::string out_path;
  std::string format = "json";
  double confidence = 0.99;
  std::optional<double> tolerance;
  bool exact = false;
  bool approx = false;
  bool traj = false;
};

/// Resolves --out against TWIRL_OUT_DIR (relative paths only) and
/// writes there, or to stdout when no path was given.
void emit(const RunConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path path(config.out_path);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("TWIRL_OUT_DIR")) {
      path = std::filesystem::path(dir) / path;
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write output file \"{}\"", path.string()));
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

/// Accepts a full label string ("XIZ"), the shorthand "I" for the
/// identity, or <letter><qubit> shorthand like "X1".
PauliLabel parse_start_label(const std::string& text, int n) {
  if (text == "I") return PauliLabel::identity(n);
  if (static_cast<int>(text.size()) == n &&
      text.find_first_not_of("IXYZ") == std::string::npos) {
    return PauliLabel::from_string(text);
  }
  if (text.size() >= 2 && std::string("XYZ").find(text[0]) != std::string::npos) {
    int qubit = std::stoi(text.substr(1));
    return PauliLabel::single(n, qubit, text[0]);
  }
  throw std::invalid_argument(
      fmt::format("cannot parse start label \"{}\" for n={}; use e.g. \"X1\" or \"XII\"", text, n));
}

int cmd_design_check(const RunConfig& config) {
  if (config.exact == config.approx) {
    throw std::invalid_argument("design-check: pass exactly one of --exact / --approx");
  }
  double deviation = 0;
  double tolerance = 0;
  json per_trial = json::array();

  if (config.exact) {
    if (config.n > kMaxEnumerationQubits) {
      throw std::domain_error(fmt::format(
          "design-check --exact: n={} exceeds the enumeration capacity (n <= {})",
          config.n, kMaxEnumerationQubits));
    }
    tolerance = config.tolerance.value_or(config.n == 1 ? 1e-10 : 1e-9);
    auto ensemble = clifford_dense_ensemble(config.n);
    Eigen::Index d = dense_dim(config.n);
    for (int t = 0; t < config.trials; ++t) {
      Rng rng = Rng::stream(config.seed, static_cast<uint64_t>(t));
      DenseMatrix a = random_matrix(d, rng), b = random_matrix(d, rng), x = random_matrix(d, rng);
      double dev = (ensemble_twirl_map(ensemble, a, b, x) - haar_twirl_map(a, b, x))
                       .cwiseAbs()
                       .maxCoeff();
      deviation = std::max(deviation, dev);
      per_trial.push_back({{"trial", t}, {"deviation", dev}});
    }
  } else {
    if (config.n < 2 || config.n > 3) {
      throw std::domain_error(fmt::format(
          "design-check --approx: n={} outside 2..3 (the moment test needs the dense oracle)",
          config.n));
    }
    tolerance = config.tolerance.value_or(5.0 / std::sqrt(static_cast<double>(config.samples)));
    std::vector<DenseMatrix> ensemble;
    ensemble.reserve(config.samples);
    Rng sample_rng = Rng::stream(config.seed, 0);
    for (long k = 0; k < config.samples; ++k) {
      ensemble.push_back(sample_design_unitary(config.n, config.reps, sample_rng).to_dense());
    }
    Eigen::Index d = dense_dim(config.n);
    for (int t = 0; t < config.trials; ++t) {
      Rng rng = Rng::stream(config.seed, 1000 + static_cast<uint64_t>(t));
      DenseMatrix a = random_matrix(d, rng), b = random_matrix(d, rng), x = random_matrix(d, rng);
      double dev = (ensemble_twirl_map(ensemble, a, b, x) - haar_twirl_map(a, b, x))
                       .cwiseAbs()
                       .maxCoeff();
      deviation = std::max(deviation, dev);
      per_trial.push_back({{"trial", t}, {"deviation", dev}});
    }
  }

  bool pass = deviation <= tolerance;
  if (config.format == "csv") {
    std::string text = "trial,deviation\n";
    for (const auto& row : per_trial) {
      text += fmt::format("{},{:.17g}\n", row.at("trial").get<int>(),
                          row.at("deviation").get<double>());
    }
    text += fmt::format("# mode={} n={} seed={} tolerance={:.3e} max_deviation={:.17g} pass={}\n",
                        config.exact ? "exact" : "approx", config.n, config.seed, tolerance,
                        deviation, pass);
    emit(config, text);
  } else {
    json doc{{"mode", config.exact ? "exact" : "approx"},
             {"n", config.n},
             {"trials", config.trials},
             {"seed", config.seed},
             {"tolerance", tolerance},
             {"max_deviation", deviation},
             {"pass", pass},
             {"per_trial", per_trial}};
    if (config.approx) {
      doc["samples"] = config.samples;
      doc["repetitions"] = config.reps;
    }
    emit(config, dump(doc));
  }
  return pass ? 0 : 1;
}

int cmd_twirl(const RunConfig& config) {
  if (config.channel_path.empty() == config.pauli_path.empty()) {
    throw std::invalid_argument("twirl: pass exactly one of --channel / --pauli");
  }
  PauliDistribution twirled;
  std::string source;
  if (!config.channel_path.empty()) {
    twirled = pauli_twirl_channel(load_channel(config.channel_path));
    source = config.channel_path;
  } else {
    twirled = load_sparse_pauli_channel(config.pauli_path).to_distribution();
    twirled.validate(1e-9);
    source = config.pauli_path;
  }
  PauliDistribution uniformized = clifford_uniformize(twirled);
  double p = depolarizing_parameter(twirled);

  if (config.format == "csv") {
    std::string text = "label,twirled_weight,uniformized_weight\n";
    bool full = twirled.weights.size() <= 4096;
    for (size_t idx = 0; idx < twirled.weights.size(); ++idx) {
      if (!full && twirled.weights[idx] == 0.0) continue;
      text += fmt::format("{},{:.17g},{:.17g}\n", PauliLabel::from_index(twirled.n, idx).str(),
                          twirled.weights[idx], uniformized.weights[idx]);
    }
    text += fmt::format("# n={} source={} depolarizing_p={:.17g}\n", twirled.n, source, p);
    emit(config, text);
  } else {
    json weights = json::object();
    for (size_t idx = 0; idx < twirled.weights.size(); ++idx) {
      if (twirled.weights[idx] != 0.0) {
        weights[PauliLabel::from_index(twirled.n, idx).str()] = twirled.weights[idx];
      }
    }
    json doc{{"n", twirled.n},
             {"source", source},
             {"twirled", weights},
             {"uniformized",
              {{"identity", uniformized.identity_weight()},
               {"nonidentity_each",
                uniformized.weights.size() > 1 ? uniformized.weights[1] : 0.0}}},
             {"depolarizing_p", p}};
    emit(config, dump(doc));
  }
  return 0;
}

int cmd_converge(const RunConfig& config) {
  if (config.exact == config.traj) {
    throw std::invalid_argument("converge: pass exactly one of --exact / --traj");
  }
  PauliLabel start = parse_start_label(config.start, config.n);
  std::string text;
  json doc;
  if (config.exact) {
    if (config.n < 2 || config.n > kMaxChainQubits) {
      throw std::domain_error(fmt::format("converge --exact: n={} outside 2..{}", config.n,
                                          kMaxChainQubits));
    }
    ConvergenceReport report = exact_convergence(start, config.reps);
    text = "n,repetition,tvd,identity_weight,gate_count_mean\n";
    for (int r = 1; r <= report.repetitions; ++r) {
      text += fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", report.n, r,
                          report.tvd_per_rep[r - 1], report.identity_weight_per_rep[r - 1],
                          report.gate_count_mean_per_rep[r - 1]);
    }
    text += fmt::format("# mode=exact start={} very_good_prob={:.17g}\n", start.str(),
                        report.very_good_prob);
    text += fmt::format("# fitted_c={:.17g} fitted_rate={:.17g}\n", report.fitted_c,
                        report.fitted_rate);
    doc = json{{"mode", "exact"},
               {"n", report.n},
               {"start", start.str()},
               {"very_good_prob", report.very_good_prob},
               {"tvd", report.tvd_per_rep},
               {"identity_weight", report.identity_weight_per_rep},
               {"gate_count_mean", report.gate_count_mean_per_rep},
               {"fitted_c", report.fitted_c},
               {"fitted_rate", report.fitted_rate}};
  } else {
    TrajectoryConvergence report =
        trajectory_convergence(config.n, config.reps, start, config.trajectories, config.seed);
    // At trajectory scale the tvd column is the worst per-qubit letter
    // marginal tvd against the uniform non-identity law.
    text = "n,repetition,tvd,identity_weight,gate_count_mean\n";
    for (int r = 1; r <= report.repetitions; ++r) {
      text += fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", report.n, r,
                          report.max_marginal_tvd_per_rep[r - 1],
                          report.identity_frequency_per_rep[r - 1],
                          report.gate_count_mean_per_rep[r - 1]);
    }
    text += fmt::format("# mode=traj start={} trajectories={} seed={}\n", start.str(),
                        report.trajectories, config.seed);
    text += "# tvd column: max over qubits of the letter-marginal tvd\n";
    doc = json{{"mode", "traj"},
               {"n", report.n},
               {"start", start.str()},
               {"trajectories", report.trajectories},
               {"seed", config.seed},
               {"marginal_tvd", report.max_marginal_tvd_per_rep},
               {"identity_frequency", report.identity_frequency_per_rep},
               {"gate_count_mean", report.gate_count_mean_per_rep}};
  }
  emit(config, config.format == "json" ? dump(doc) : text);
  return 0;
}

int cmd_sample_circuit(const RunConfig& config) {
  std::string text;
  for (int k = 0; k < config.trials; ++k) {
    Rng rng = Rng::stream(config.seed, static_cast<uint64_t>(k));
    DesignCircuit circuit = sample_design_unitary(config.n, config.reps, rng);
    text += fmt::format("# circuit {} gate_count {}\n", k, circuit.gate_count());
    text += circuit.to_text();
  }
  emit(config, text);
  return 0;
}

int cmd_fidelity(const RunConfig& config) {
  if (config.channel_path.empty()) throw std::invalid_argument("fidelity: --channel is required");
  if (config.exact && config.approx) {
    throw std::invalid_argument("fidelity: pass at most one of --exact / --approx");
  }
  KrausChannel ch = load_channel(config.channel_path);
  NoiseScenario scenario = NoiseScenario::from_channel(
      ch, std::filesystem::path(config.channel_path).stem().string());

  bool use_approx = config.approx;
  DesignSampler sampler;
  int repetitions = 0;
  if (use_approx) {
    sampler = approx_design_sampler(ch.n, config.reps);
    repetitions = config.reps;
  } else {
    if (ch.n > kMaxEnumerationQubits) {
      throw std::domain_error(fmt::format(
          "fidelity: exact design needs n <= {}; use --approx for n={}", kMaxEnumerationQubits,
          ch.n));
    }
    sampler = exact_design_sampler(ch.n);
  }

  Rng rng = Rng::stream(config.seed, 0);
  FidelityEstimate est =
      estimate_average_fidelity(scenario, config.shots, sampler, rng, config.confidence);
  double exact_value = exact_average_fidelity(ch);
  json doc = result_record(scenario, use_approx ? "approx" : "exact", repetitions, est,
                           exact_value, config.seed);
  double dim = static_cast<double>(ch.dim());
  doc["exact_gate_fidelity"] = convert_fidelities(exact_value, dim).gate;
  if (est.mean >= 1.0 / (dim + 1.0)) {
    FidelityPair pair = convert_fidelities(est.mean, dim);
    doc["gate_fidelity"] = pair.gate;
    doc["entanglement_fidelity"] = pair.entanglement;
  }

  if (config.format == "csv") {
    std::string text = "key,value\n";
    for (const auto& [key, value] : doc.items()) {
      text += fmt::format("{},{}\n", key, value.dump());
    }
    emit(config, text);
  } else {
    emit(config, dump(doc));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unitary 2-designs, Clifford twirling, and fidelity estimation"};
  app.require_subcommand(1);

  RunConfig config;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "root seed for all randomized draws");
    cmd->add_option("--out", config.out_path,
                    "output file (relative paths resolve against TWIRL_OUT_DIR)");
    cmd->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* check = app.add_subcommand(
      "design-check", "compare an ensemble twirl against the closed-form Haar twirl");
  check->add_option("--n", config.n, "qubit count")->required();
  check->add_flag("--exact", config.exact, "use the full enumerated Clifford group");
  check->add_flag("--approx", config.approx, "use sampled approximate-design circuits");
  check->add_option("--trials", config.trials, "number of random (A,B,X) triples");
  check->add_option("--reps", config.reps, "procedure repetitions per sampled circuit");
  check->add_option("--samples", config.samples, "ensemble size in approximate mode");
  check->add_option("--tolerance", config.tolerance, "override the pass threshold");
  add_common(check);

  CLI::App* twirl_cmd = app.add_subcommand(
      "twirl", "Pauli-twirl a channel and uniformize it over non-identity labels");
  twirl_cmd->add_option("--channel", config.channel_path, "Kraus channel JSON file");
  twirl_cmd->add_option("--pauli", config.pauli_path, "sparse Pauli-channel text file");
  add_common(twirl_cmd);

  CLI::App* converge = app.add_subcommand(
      "converge", "track convergence to the uniform non-identity distribution");
  converge->add_option("--n", config.n, "qubit count")->required();
  converge->add_flag("--exact", config.exact, "exact distribution dynamics (2 <= n <= 8)");
  converge->add_flag("--traj", config.traj, "Monte-Carlo trajectories (any n >= 2)");
  converge->add_option("--reps", config.reps, "number of procedure repetitions");
  converge->add_option("--start", config.start, "start label, e.g. X1 or XII");
  converge->add_option("--trajectories", config.trajectories, "trajectory count in --traj mode");
  add_common(converge);

  CLI::App* sample = app.add_subcommand(
      "sample-circuit", "dump sampled design circuits in the gate text format");
  sample->add_option("--n", config.n, "qubit count")->required();
  sample->add_option("--reps", config.reps, "procedure repetitions per circuit");
  sample->add_option("--count", config.trials, "number of circuits to sample");
  add_common(sample);

  CLI::App* fidelity = app.add_subcommand(
      "fidelity", "randomized average-fidelity estimation for a Kraus channel");
  fidelity->add_option("--channel", config.channel_path, "Kraus channel JSON file")->required();
  fidelity->add_flag("--exact", config.exact, "exact Clifford design (default, n <= 2)");
  fidelity->add_flag("--approx", config.approx, "approximate design circuits (n >= 2)");
  fidelity->add_option("--reps", config.reps, "procedure repetitions in approximate mode");
  fidelity->add_option("--shots", config.shots, "number of experiments");
  fidelity->add_option("--confidence", config.confidence, "confidence level for the radius");
  add_common(fidelity);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_design_check(config);
    if (twirl_cmd->parsed()) return cmd_twirl(config);
    if (converge->parsed()) return cmd_converge(config);
    if (sample->parsed()) return cmd_sample_circuit(config);
    if (fidelity->parsed()) return cmd_fidelity(config);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
