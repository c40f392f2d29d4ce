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

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hamlearn/lindblad.hpp"
#include "hamlearn/model_space.hpp"
#include "hamlearn/pauli.hpp"

namespace hamlearn {

/// Provenance of one real row: the input observable, the input state index
/// (0 for steady-state systems), and whether the row is the real or
/// imaginary part of the underlying complex equation.
struct RowLabel {
  std::string input_op;
  int state_id = 0;
  char part = 'r';  // 'r' or 'i'
};

/**
 * The assembled linear system relating model coordinates to measured
 * expectation values: a real matrix over the ModelSpace column layout,
 * with an optional right-hand side for dynamical (heterogeneous) systems.
 *
 * Every complex structural equation is split into a real-part row and an
 * imaginary-part row; rows with norm below kRowDropTolerance are dropped.
 * `measured_operators` records the distinct Pauli observables whose
 * expectation values populate the entries (identity excluded, since it
 * needs no measurement), for every input processed, including inputs whose
 * rows were dropped as zero.
 */
struct CorrelationSystem {
  static constexpr double kRowDropTolerance = 1e-13;

  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;  // empty for homogeneous systems
  bool dynamical = false;
  std::size_t hamiltonian_dim = 0;
  std::vector<RowLabel> row_labels;
  std::vector<std::string> col_labels;
  std::vector<PauliString> measured_operators;  // sorted, unique

  Eigen::Index rows() const { return matrix.rows(); }
  Eigen::Index cols() const { return matrix.cols(); }
  bool has_rhs() const { return dynamical; }

  /// Plain-text serialisation: a header with dimensions and labels, then
  /// one whitespace-separated numeric row per line (rhs value last when
  /// present). Round-trips exactly through load().
  void save(const std::string& path) const;
  void write(std::ostream& out) const;
  static CorrelationSystem load(const std::string& path);
  static CorrelationSystem read(std::istream& in);
};

/// Cached Pauli-string expectation values Tr[rho P] for one state,
/// evaluated by bitwise application of P (no dense operator is formed).
class PauliExpectationCache {
 public:
  explicit PauliExpectationCache(Eigen::MatrixXcd rho);

  double value(const PauliString& p);
  std::size_t n_sites() const { return n_sites_; }

 private:
  Eigen::MatrixXcd rho_;
  std::size_t n_sites_;
  std::map<PauliString, double> cache_;
};

/// One complex structural row over the model columns, evaluated on the
/// cache's state, plus the Pauli observables required to populate it.
struct StructuralRow {
  Eigen::VectorXcd entries;
  std::vector<PauliString> measurements;
};

/// Hamiltonian columns hold -i<[O, S_l]>; gamma columns hold the
/// coordinate-mapped <L_m^dag O L_n - {L_m^dag L_n, O}/2> values.
StructuralRow structural_row(PauliExpectationCache& cache, const PauliString& input,
                             const ModelSpace& model);

/**
 * Incremental assembler for steady-state systems: inputs are appended one
 * at a time and a snapshot of the homogeneous system over the inputs so
 * far can be taken at any point. Used for cardinality sweeps.
 */
class SteadyRowBuilder {
 public:
  SteadyRowBuilder(const DensityMatrix& rho_ss, const ModelSpace& model);

  void add_input(const PauliString& input);

  std::size_t input_count() const { return input_count_; }
  std::size_t row_count() const { return row_labels_.size(); }
  std::size_t measured_count() const { return measured_.size(); }

  CorrelationSystem snapshot() const;

 private:
  const ModelSpace& model_;
  PauliExpectationCache cache_;
  std::size_t input_count_ = 0;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<RowLabel> row_labels_;
  std::map<PauliString, bool> measured_;
};

/// Homogeneous steady-state system C x = 0 over all inputs.
CorrelationSystem assemble_steady(const DensityMatrix& rho_ss,
                                  const std::vector<PauliString>& inputs,
                                  const ModelSpace& model);

/**
 * Heterogeneous dynamical system C' x = W. Structural entries are
 * evaluated on each input state at time zero; the right-hand side holds
 * the finite-difference derivative of <O_i(t)>_j at t = 0:
 *   order 1: (<O(dt)> - <O(0)>) / dt
 *   order 2: (-<O(2 dt)> + 4 <O(dt)> - 3 <O(0)>) / (2 dt)
 * Time-evolved expectations come from exact propagation of the states.
 */
CorrelationSystem assemble_dynamical(const std::vector<DensityMatrix>& states,
                                     const std::vector<PauliString>& inputs,
                                     const LindbladGenerator& gen, double dt, int order,
                                     const ModelSpace& model);

/// Copy of the system with every matrix entry (and rhs entry, if present)
/// perturbed by an independent N(0, sigma^2) draw. Deterministic in seed;
/// entries are perturbed in row-major order, rhs entries afterwards.
CorrelationSystem inject_noise(const CorrelationSystem& system, double sigma,
                               std::uint64_t seed);

/// Number of distinct Pauli observables needed to populate the system.
std::size_t measurement_complexity(const CorrelationSystem& system);

}  // namespace hamlearn
