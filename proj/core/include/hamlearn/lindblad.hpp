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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

/// Raised when a generator has no unique fixed point (degenerate kernel or
/// purely Hamiltonian dynamics).
class NonUniqueFixedPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest chain for which dense superoperators (dim^2 x dim^2) are built.
inline constexpr std::size_t kMaxSuperoperatorSites = 6;

/**
 * Parameters of a thermal XX spin chain: per-site fields c_i . sigma_i,
 * nearest-neighbour X_i X_{i+1} couplings, and a per-site thermal reservoir
 * with coupling g and occupation nbar. All quantities share one
 * dimensionless energy unit with hbar = 1.
 */
struct SpinChainSpec {
  std::size_t n_sites = 0;
  std::vector<Eigen::Vector3d> local_fields;  // (c_x, c_y, c_z) per site
  std::vector<double> couplings;              // J_{i,i+1}, n_sites - 1 entries
  double reservoir_coupling = 0.0;            // g
  double thermal_occupation = 0.0;            // nbar

  /// Same field and coupling on every site/bond.
  static SpinChainSpec uniform(std::size_t n_sites, const Eigen::Vector3d& field,
                               double coupling, double g, double nbar);

  void validate() const;

  double excitation_rate() const {  // g_+
    return reservoir_coupling * thermal_occupation / 2.0;
  }
  double relaxation_rate() const {  // g_-
    return reservoir_coupling * (thermal_occupation + 1.0) / 2.0;
  }
};

/**
 * A density matrix validated against the state invariants: Hermitian to
 * 1e-12, unit trace to 1e-12, minimum eigenvalue >= -1e-10.
 */
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kEigenvalueFloor = -1e-10;

  /// Validates the invariants, throwing std::invalid_argument on violation.
  static DensityMatrix checked(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  explicit DensityMatrix(Eigen::MatrixXcd m) : mat_(std::move(m)) {}
  Eigen::MatrixXcd mat_;
};

/// One dissipator block: a jump-operator basis on a region of sites with a
/// coefficient matrix gamma over basis index pairs.
struct JumpTerm {
  std::vector<std::size_t> sites;
  std::vector<Eigen::MatrixXcd> ops;  // full-dimension operators
  std::vector<std::string> labels;
  Eigen::MatrixXcd gamma;
};

/**
 * Dense Lindblad generator: rho' = -i[H, rho]
 *   + sum_{n,m} gamma_{nm} (L_n rho L_m^dag - {L_m^dag L_n, rho} / 2).
 */
struct LindbladGenerator {
  std::size_t n_sites = 0;
  Eigen::MatrixXcd hamiltonian;
  std::vector<JumpTerm> jumps;

  Eigen::Index dim() const { return hamiltonian.rows(); }

  /// Checks shape consistency; with require_psd_gamma also checks every
  /// gamma block is PSD to -1e-10.
  void validate(bool require_psd_gamma = false) const;
};

enum class JumpBasisMode { Ladder, Pauli };

/// H = sum_i c_i . sigma_i + sum_i J_{i,i+1} X_i X_{i+1}.
Eigen::MatrixXcd build_hamiltonian(const SpinChainSpec& spec);

/// Per-site thermal dissipator, either over the ladder basis
/// {sigma+, sigma-} with diagonal rates diag(g_+, g_-) (zero-rate channels
/// omitted), or over the Pauli basis {X, Y} with the coefficient matrix
/// obtained by expanding sigma+- = (X -+ iY)/2. Both modes generate the
/// same Liouvillian.
LindbladGenerator build_thermal_generator(const SpinChainSpec& spec, JumpBasisMode mode);

/// The 2x2 Pauli-basis coefficient matrix of a single-site thermal
/// dissipator with rates (g_+, g_-), ordered (X, Y).
Eigen::Matrix2cd thermal_pauli_gamma(double g_plus, double g_minus);

/// Embeds a single-site operator at `site` of an n_sites chain.
Eigen::MatrixXcd embed_single_site(const Eigen::Matrix2cd& op, std::size_t site,
                                   std::size_t n_sites);

/// Column-stacking vectorisation and its inverse.
Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v);

/// Superoperator matrix L with vec(generator[rho]) = L vec(rho),
/// column-stacking convention.
Eigen::MatrixXcd liouvillian_matrix(const LindbladGenerator& gen);

/// Heisenberg-picture action on an observable:
/// -i[O, H] + sum gamma_{nm} (L_m^dag O L_n - {L_m^dag L_n, O} / 2).
Eigen::MatrixXcd adjoint_apply(const LindbladGenerator& gen, const Eigen::MatrixXcd& o);

/**
 * Unique fixed point of the generator, solved by dense eigendecomposition
 * of the Liouvillian: the eigenvector of minimum-magnitude eigenvalue is
 * Hermitized and trace-normalised. Uniqueness requires the second-smallest
 * eigenvalue magnitude to clear 1e-8 times the spectral scale; degenerate
 * kernels (including purely Hamiltonian generators) raise
 * NonUniqueFixedPointError. The result satisfies ||L[rho]||_F <= 1e-10.
 */
DensityMatrix steady_state(const LindbladGenerator& gen);

/// Cached exp(L t) for repeated propagation under one generator.
class Propagator {
 public:
  Propagator(const LindbladGenerator& gen, double t);

  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Raw application without density-matrix validation.
  Eigen::MatrixXcd apply_matrix(const Eigen::MatrixXcd& rho) const;

  double time() const { return t_; }

 private:
  double t_;
  Eigen::MatrixXcd exp_lt_;
};

/// rho(t) = exp(L t)[rho0] via matrix exponential of the Liouvillian.
DensityMatrix propagate(const LindbladGenerator& gen, const DensityMatrix& rho0, double t);

/// Tr[rho O] for Hermitian O (validated to 1e-12); the imaginary part must
/// be below 1e-11 and is discarded.
double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& o);

/// States U rho U^dag for Pauli-string unitaries. The identity conjugation
/// (rho itself) always comes first; identity strings in `unitaries` are
/// skipped to avoid duplicates.
std::vector<DensityMatrix> conjugated_state_set(const DensityMatrix& rho_ss,
                                                const std::vector<PauliString>& unitaries);

}  // namespace hamlearn
