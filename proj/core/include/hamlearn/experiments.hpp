// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hamlearn/estimators.hpp"
#include "hamlearn/lindblad.hpp"
#include "hamlearn/model_space.hpp"

namespace hamlearn {

/**
 * Configuration of one experiment run. Defaults reproduce the reference
 * thermal XX chain: per-site field (0.5, 0, -2.55), coupling J = 0.25,
 * reservoir g = 0.05 at zero occupation, K = 2 local Hamiltonian model
 * with an unconstrained per-site {X, Y, Z} dissipator model.
 *
 * Loadable from a JSON file (one key per field, unknown keys rejected);
 * see the README for the schema.
 */
struct ExperimentConfig {
  // chain
  std::size_t sites = 3;
  Eigen::Vector3d field{0.5, 0.0, -2.55};
  std::vector<Eigen::Vector3d> fields;  // optional per-site override
  double coupling = 0.25;
  std::vector<double> couplings;  // optional per-bond override
  double g = 0.05;
  double nbar = 0.0;

  // model space
  std::size_t hamiltonian_locality = 2;
  GammaConstraint gamma_constraint = GammaConstraint::UnconstrainedComplex;

  // input operator sets
  std::size_t input_locality = 4;      // steady-state experiments
  std::size_t dyn_input_locality = 2;  // dynamical experiments

  // dynamics
  double dt = 1e-3 / 2.55;  // reference time step, dt = 1e-3 / |c_z|
  std::vector<double> dt_grid = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2,  5e-2,
                                 1e-1, 0.15, 0.2,  0.3,  0.5};
  int fd_order = 1;
  std::string solver = "both";  // lsq | psd | both

  // noise sweep
  std::vector<double> sigma_grid;  // default: 13 log-spaced points 1e-6..1e-3
  std::size_t noise_repeats = 20;
  std::string disorder_mode = "seeds";  // seeds | models

  // size sweep
  std::size_t n_min = 2;
  std::size_t n_max = 4;

  // finite-difference variance
  std::size_t samples = 1000000;
  double fd_sigma = 0.1;

  std::uint64_t seed = 12345;
  std::size_t stride = 1;
  std::size_t max_sites = 6;

  std::string out;             // empty: stdout
  std::string format = "csv";  // csv | structured

  ExperimentConfig();

  /// Throws std::invalid_argument with an actionable message on any
  /// inconsistent setting.
  void validate() const;

  SpinChainSpec chain_spec() const { return chain_spec(sites); }
  SpinChainSpec chain_spec(std::size_t n) const;
  ModelSpace model_space(std::size_t n) const;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
  void save_json(const std::string& path) const;
};

/// One sweep point. Unused fields keep their defaults (NaN for doubles),
/// so every experiment shares a single output schema.
struct ResultRecord {
  std::string experiment;
  double variable = 0.0;
  std::uint64_t seed = 0;
  std::string solver;
  int order = 0;
  int locality = 0;
  std::size_t n_rows = 0;
  std::size_t model_dim = 0;
  double delta_H = std::numeric_limits<double>::quiet_NaN();
  double delta_HL = std::numeric_limits<double>::quiet_NaN();
  double delta_env = std::numeric_limits<double>::quiet_NaN();
  double s0 = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::size_t measurement_complexity = 0;
  bool ambiguous = false;
  bool converged = true;
  double truth_residual = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double ci_half = std::numeric_limits<double>::quiet_NaN();
};

/// Steady-state cardinality sweep: the input set grows through the
/// deterministic 1..k-local enumeration; each prefix is assembled and
/// solved with the null-vector estimator.
std::vector<ResultRecord> run_steady_sweep(const ExperimentConfig& config);

/// Noise sweep over sigma_grid x noise_repeats on the full-input steady
/// system. disorder_mode "seeds" re-noises one fixed model; "models" draws
/// a perturbed chain per repeat before noising.
std::vector<ResultRecord> run_noise_sweep(const ExperimentConfig& config);

/// Dynamical reconstruction versus chain length, least-squares and
/// PSD-constrained solvers side by side.
std::vector<ResultRecord> run_dynamic_size(const ExperimentConfig& config);

/// Dynamical reconstruction versus time step for stencil orders 1 and 2.
std::vector<ResultRecord> run_dynamic_dt(const ExperimentConfig& config);

/// Monte-Carlo finite-difference variance ratio.
std::vector<ResultRecord> run_fd_variance(const ExperimentConfig& config);

enum class ResultFormat { Csv, Structured };
ResultFormat result_format_from_name(const std::string& name);

std::string results_csv_header();
std::string results_to_csv(const std::vector<ResultRecord>& records);
std::string results_to_structured(const std::vector<ResultRecord>& records);

/// Writes records to `path` ("" or "-" for stdout). Two runs with the same
/// config and seed produce byte-identical files.
void emit_results(const std::vector<ResultRecord>& records, const std::string& path,
                  ResultFormat format);

/// Inverse of the CSV emitter, for round-trip checks and downstream tools.
std::vector<ResultRecord> parse_results_csv(const std::string& text);

/// Worker count for sweep pools: HAMLEARN_THREADS when set (minimum 1),
/// otherwise the hardware concurrency.
std::size_t worker_thread_count();

/// Runs fn(0..count-1) on the worker pool. Results written through
/// pre-sized slots stay deterministic regardless of scheduling. The first
/// exception thrown by a task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hamlearn
