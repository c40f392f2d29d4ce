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
#include <limits>
#include <string>

#include "hamlearn/correlation.hpp"
#include "hamlearn/lindblad.hpp"
#include "hamlearn/model_space.hpp"

namespace hamlearn {

/**
 * Solver output: the estimated coordinate vector over the ModelSpace
 * layout, the singular spectrum of the solved system (descending, padded
 * with zeros to the model dimension when the system is wide), and solver
 * metadata. Error sectors are filled in by error_metrics once a truth
 * vector is available.
 */
struct EstimationReport {
  Eigen::VectorXd x_est;
  Eigen::VectorXd singular_values;
  double s0 = 0.0;
  double gap = 0.0;
  bool ambiguous = false;
  std::string solver;

  int iterations = 0;
  bool converged = true;
  Eigen::Index rank = 0;
  double residual = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double min_gamma_eigenvalue = std::numeric_limits<double>::quiet_NaN();

  double delta_H = std::numeric_limits<double>::quiet_NaN();
  double delta_HL = std::numeric_limits<double>::quiet_NaN();
  double delta_env = std::numeric_limits<double>::quiet_NaN();

  /// Key-value document (JSON object, one key per field).
  std::string to_json() const;
};

/**
 * Null-vector estimator for homogeneous systems: the right singular vector
 * of the smallest singular value, unit norm, sign-fixed so the first
 * non-negligible Hamiltonian-sector entry is positive. The report is
 * flagged ambiguous when gap / s0 falls below uniqueness_ratio; the vector
 * is still returned.
 */
EstimationReport svd_null_estimator(const CorrelationSystem& system,
                                    double uniqueness_ratio = 10.0);

/// Minimum-norm least squares via SVD pseudoinverse with a relative
/// singular-value cutoff. Heterogeneous systems only.
EstimationReport least_squares_estimator(const CorrelationSystem& system,
                                         double sv_cutoff = 1e-12);

struct PsdOptions {
  int max_iterations = 100000;
  double objective_tolerance = 1e-10;  // relative objective change
};

/**
 * ||C' x - W||^2 minimised subject to every region's reconstructed gamma
 * block (Hermitized) being positive semi-definite. Accelerated projected
 * gradient with function-value restart, warm-started at the projected
 * least-squares solution; the projection clips negative eigenvalues of the
 * Hermitian part at zero. Non-convergence is reported, not thrown.
 */
EstimationReport psd_constrained_estimator(const CorrelationSystem& system,
                                           const ModelSpace& model,
                                           const PsdOptions& options = {});

struct SectorErrors {
  double delta_H = 0.0;
  double delta_HL = 0.0;
  double delta_env = 0.0;
};

enum class ErrorScaling { Scaled, Absolute };

/// Normalised 2-norm errors over the Hamiltonian sector, the full vector,
/// and the gamma sector. Scaled mode first rescales x_est by the real
/// scalar minimising ||x_true - a x_est||_2, the natural alignment for
/// homogeneous (scale-free) estimates.
SectorErrors error_metrics(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_est,
                           const ModelSpace& model, ErrorScaling scaling);

/// Exact model coordinates of a thermal XX chain in the given layout:
/// Hamiltonian couplings mapped onto the enumerated basis terms and the
/// per-site Pauli-basis thermal gamma embedded in each region block.
Eigen::VectorXd true_model_vector(const SpinChainSpec& spec, const ModelSpace& model);

struct VarianceRatioEstimate {
  double ratio = 0.0;
  double ci_half = 0.0;  // half-width of a 95% batch-means interval
};

/**
 * Monte-Carlo estimate of Var[order-2 stencil] / Var[order-1 stencil]
 * under i.i.d. Gaussian noise of equal variance on <O(0)>, <O(dt)>,
 * <O(2 dt)>, both stencils estimating the same derivative over the same
 * dt. The analytic value is 13/4.
 */
VarianceRatioEstimate derivative_variance_ratio(std::size_t samples, double noise_sigma,
                                                std::uint64_t seed);

}  // namespace hamlearn
