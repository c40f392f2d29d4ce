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

#include "hamlearn/estimators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hamlearn/random.hpp"

namespace hamlearn {

namespace {

// Descending singular values padded with zeros to the model dimension, so
// wide (underdetermined) systems expose their exact-kernel zeros.
Eigen::VectorXd padded_spectrum(const Eigen::VectorXd& sv, Eigen::Index cols) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cols);
  out.head(std::min(sv.size(), cols)) = sv.head(std::min(sv.size(), cols));
  return out;
}

void fill_spectrum_fields(EstimationReport& report, const Eigen::VectorXd& padded,
                          double uniqueness_ratio) {
  report.singular_values = padded;
  const Eigen::Index n = padded.size();
  report.s0 = n > 0 ? padded(n - 1) : 0.0;
  const double s1 = n > 1 ? padded(n - 2) : report.s0;
  report.gap = s1 - report.s0;
  if (report.s0 > 0.0) {
    report.ambiguous = (report.gap / report.s0) < uniqueness_ratio;
  } else {
    report.ambiguous = report.gap <= 0.0;
  }
}

void fix_sign(Eigen::VectorXd& x, std::size_t hamiltonian_dim) {
  const double tol = 1e-12 * std::max(1.0, x.norm());
  Eigen::Index pivot = -1;
  const auto h = static_cast<Eigen::Index>(hamiltonian_dim);
  for (Eigen::Index i = 0; i < std::min(h, x.size()); ++i) {
    if (std::abs(x(i)) > tol) {
      pivot = i;
      break;
    }
  }
  if (pivot < 0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (std::abs(x(i)) > tol) {
        pivot = i;
        break;
      }
    }
  }
  if (pivot >= 0 && x(pivot) < 0.0) x = -x;
}

std::string json_number(double v) {
  if (std::isnan(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string EstimationReport::to_json() const {
  std::ostringstream out;
  out << "{\n";
  out << "  \"solver\": \"" << solver << "\",\n";
  out << "  \"s0\": " << json_number(s0) << ",\n";
  out << "  \"gap\": " << json_number(gap) << ",\n";
  out << "  \"ambiguous\": " << (ambiguous ? "true" : "false") << ",\n";
  out << "  \"iterations\": " << iterations << ",\n";
  out << "  \"converged\": " << (converged ? "true" : "false") << ",\n";
  out << "  \"rank\": " << rank << ",\n";
  out << "  \"residual\": " << json_number(residual) << ",\n";
  out << "  \"objective\": " << json_number(objective) << ",\n";
  out << "  \"min_gamma_eigenvalue\": " << json_number(min_gamma_eigenvalue) << ",\n";
  out << "  \"delta_H\": " << json_number(delta_H) << ",\n";
  out << "  \"delta_HL\": " << json_number(delta_HL) << ",\n";
  out << "  \"delta_env\": " << json_number(delta_env) << ",\n";
  out << "  \"x_est\": [";
  for (Eigen::Index i = 0; i < x_est.size(); ++i) {
    if (i) out << ", ";
    out << json_number(x_est(i));
  }
  out << "],\n  \"singular_values\": [";
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (i) out << ", ";
    out << json_number(singular_values(i));
  }
  out << "]\n}\n";
  return out.str();
}

EstimationReport svd_null_estimator(const CorrelationSystem& system,
                                    double uniqueness_ratio) {
  if (system.has_rhs()) {
    throw std::invalid_argument("svd_null_estimator expects a homogeneous system");
  }
  if (system.rows() < 1) {
    throw std::invalid_argument("svd_null_estimator needs at least one row");
  }
  const Eigen::Index n = system.cols();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(system.matrix, Eigen::ComputeFullV);

  EstimationReport report;
  report.solver = "svd-null";
  fill_spectrum_fields(report, padded_spectrum(svd.singularValues(), n), uniqueness_ratio);
  report.x_est = svd.matrixV().col(n - 1);
  fix_sign(report.x_est, system.hamiltonian_dim);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  report.rank = (svd.singularValues().array() > 1e-12 * smax).count();
  report.residual = (system.matrix * report.x_est).norm();
  return report;
}

EstimationReport least_squares_estimator(const CorrelationSystem& system,
                                         double sv_cutoff) {
  if (!system.has_rhs()) {
    throw std::invalid_argument("least_squares_estimator expects a dynamical system");
  }
  if (system.rows() < 1) {
    throw std::invalid_argument("least_squares_estimator needs at least one row");
  }
  const Eigen::Index n = system.cols();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(system.matrix,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cutoff = sv_cutoff * smax;

  Eigen::VectorXd uy = svd.matrixU().transpose() * system.rhs;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    uy(i) = sv(i) > cutoff ? uy(i) / sv(i) : 0.0;
  }

  EstimationReport report;
  report.solver = "least-squares";
  report.x_est = svd.matrixV() * uy;
  fill_spectrum_fields(report, padded_spectrum(sv, n), /*uniqueness_ratio=*/0.0);
  report.ambiguous = false;
  report.rank = (sv.array() > cutoff).count();
  report.residual = (system.matrix * report.x_est - system.rhs).norm();
  report.objective = report.residual * report.residual;
  return report;
}

namespace {

// Column scaling that makes the coordinate metric match the Frobenius
// metric on the gamma blocks, so eigenvalue clipping is an exact Euclidean
// projection. Identity for the unconstrained layout; off-diagonal Hermitian
// coordinates enter two matrix entries and get weight sqrt(2).
Eigen::VectorXd gamma_metric_scale(const ModelSpace& model) {
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(model.dimension());
  if (model.gamma_constraint() == GammaConstraint::UnconstrainedComplex) return scale;
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    const std::size_t b = model.regions()[r].jump_basis.size();
    std::size_t col = model.region_offset(r) + b;
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = n + 1; m < b; ++m) {
        scale(static_cast<Eigen::Index>(col)) = std::numbers::sqrt2;
        scale(static_cast<Eigen::Index>(col + 1)) = std::numbers::sqrt2;
        col += 2;
      }
    }
  }
  return scale;
}

// Projects the gamma sector onto {Hermitian part PSD}: the anti-Hermitian
// part is untouched, negative eigenvalues of the Hermitian part clip to 0.
// Returns the smallest pre-projection eigenvalue seen.
double project_psd(Eigen::VectorXd& x, const ModelSpace& model) {
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    const Eigen::MatrixXcd gamma = model.unpack_gamma(x, r);
    const Eigen::MatrixXcd herm = (gamma + gamma.adjoint()) / 2.0;
    const Eigen::MatrixXcd anti = gamma - herm;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    const Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd projected =
        es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    model.pack_gamma(projected + anti, r, x);
  }
  return min_eig;
}

double min_gamma_eigenvalue_of(const Eigen::VectorXd& x, const ModelSpace& model) {
  double min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    const Eigen::MatrixXcd gamma = model.unpack_gamma(x, r);
    const Eigen::MatrixXcd herm = (gamma + gamma.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return min_eig;
}

}  // namespace

EstimationReport psd_constrained_estimator(const CorrelationSystem& system,
                                           const ModelSpace& model,
                                           const PsdOptions& options) {
  if (!system.has_rhs()) {
    throw std::invalid_argument("psd_constrained_estimator expects a dynamical system");
  }
  if (static_cast<std::size_t>(system.cols()) != model.dimension()) {
    throw std::invalid_argument("system columns do not match the model layout");
  }

  // Work in coordinates scaled so the PSD projection is exact (no-op
  // rescaling for the default unconstrained layout).
  const Eigen::VectorXd scale = gamma_metric_scale(model);
  const Eigen::MatrixXd a = system.matrix * scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd& w = system.rhs;

  EstimationReport seed = least_squares_estimator(system);
  const double lipschitz =
      seed.singular_values.size() ? seed.singular_values(0) * seed.singular_values(0) : 0.0;

  auto project = [&](Eigen::VectorXd& xs) {
    Eigen::VectorXd x_model = xs.cwiseQuotient(scale);
    const double me = project_psd(x_model, model);
    xs = x_model.cwiseProduct(scale);
    return me;
  };
  auto objective = [&](const Eigen::VectorXd& xs) { return (a * xs - w).squaredNorm(); };

  Eigen::VectorXd x = seed.x_est.cwiseProduct(scale);
  project(x);

  EstimationReport report;
  report.solver = "psd-constrained";
  report.singular_values = seed.singular_values;
  report.s0 = seed.s0;
  report.gap = seed.gap;
  report.rank = seed.rank;

  double f_x = objective(x);
  bool converged = false;
  int iterations = 0;

  if (lipschitz > 0.0) {
    Eigen::VectorXd y = x;
    double t = 1.0;
    while (iterations < options.max_iterations) {
      ++iterations;
      Eigen::VectorXd x_new = y - (a.transpose() * (a * y - w)) / lipschitz;
      project(x_new);
      double f_new = objective(x_new);

      if (f_new > f_x) {
        // Momentum overshoot: restart with a plain projected-gradient step
        // from the last accepted point, which cannot increase f.
        t = 1.0;
        x_new = x - (a.transpose() * (a * x - w)) / lipschitz;
        project(x_new);
        f_new = objective(x_new);
      }

      const double t_new = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
      y = x_new + ((t - 1.0) / t_new) * (x_new - x);
      const bool small_change =
          std::abs(f_new - f_x) <= options.objective_tolerance * std::max(f_x, 1e-30);
      x = std::move(x_new);
      f_x = f_new;
      t = t_new;
      if (small_change) {
        converged = true;
        break;
      }
    }
  } else {
    converged = true;  // zero system
  }

  report.x_est = x.cwiseQuotient(scale);
  report.iterations = iterations;
  report.converged = converged;
  report.residual = (system.matrix * report.x_est - system.rhs).norm();
  report.objective = report.residual * report.residual;
  report.min_gamma_eigenvalue = min_gamma_eigenvalue_of(report.x_est, model);
  report.ambiguous = false;
  return report;
}

SectorErrors error_metrics(const Eigen::VectorXd& x_true, const Eigen::VectorXd& x_est,
                           const ModelSpace& model, ErrorScaling scaling) {
  if (x_true.size() != x_est.size() ||
      static_cast<std::size_t>(x_true.size()) != model.dimension()) {
    throw std::invalid_argument("error_metrics: layout mismatch");
  }
  Eigen::VectorXd aligned = x_est;
  if (scaling == ErrorScaling::Scaled) {
    const double denom = x_est.squaredNorm();
    const double a = denom > 0.0 ? x_true.dot(x_est) / denom : 0.0;
    aligned = a * x_est;
  }
  const auto h = static_cast<Eigen::Index>(model.hamiltonian_dimension());
  const auto g = static_cast<Eigen::Index>(model.gamma_dimension());

  SectorErrors errors;
  const double h_norm = x_true.head(h).norm();
  if (h_norm == 0.0) throw std::invalid_argument("error_metrics: zero-norm truth Hamiltonian sector");
  errors.delta_H = (x_true.head(h) - aligned.head(h)).norm() / h_norm;

  const double full_norm = x_true.norm();
  errors.delta_HL = (x_true - aligned).norm() / full_norm;

  if (g > 0) {
    const double g_norm = x_true.tail(g).norm();
    if (g_norm == 0.0) {
      throw std::invalid_argument("error_metrics: zero-norm truth gamma sector");
    }
    errors.delta_env = (x_true.tail(g) - aligned.tail(g)).norm() / g_norm;
  }
  return errors;
}

Eigen::VectorXd true_model_vector(const SpinChainSpec& spec, const ModelSpace& model) {
  spec.validate();
  if (spec.n_sites != model.n_sites()) {
    throw std::invalid_argument("chain and model site counts differ");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.dimension());

  const auto& terms = model.hamiltonian_terms();
  for (std::size_t l = 0; l < terms.size(); ++l) {
    const PauliString& s = terms[l];
    const auto support = s.support();
    double c = 0.0;
    if (support.size() == 1) {
      const Pauli op = s.at(support[0]);
      c = spec.local_fields[support[0]](static_cast<int>(op) - 1);
    } else if (support.size() == 2 && support[1] == support[0] + 1 &&
               s.at(support[0]) == Pauli::X && s.at(support[1]) == Pauli::X) {
      c = spec.couplings[support[0]];
    }
    if (c != 0.0) x(static_cast<Eigen::Index>(l)) = c;
  }

  const Eigen::Matrix2cd site_gamma =
      thermal_pauli_gamma(spec.excitation_rate(), spec.relaxation_rate());
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    const LindbladRegion& region = model.regions()[r];
    const std::size_t b = region.jump_basis.size();
    // Locate X and Y within the region's jump basis.
    Eigen::Index ix = -1, iy = -1;
    for (std::size_t i = 0; i < b; ++i) {
      const Pauli op = region.jump_basis[i].at(region.site);
      if (op == Pauli::X) ix = static_cast<Eigen::Index>(i);
      if (op == Pauli::Y) iy = static_cast<Eigen::Index>(i);
    }
    if (ix < 0 || iy < 0) {
      if (spec.reservoir_coupling != 0.0) {
        throw std::invalid_argument("region jump basis cannot represent the thermal dissipator");
      }
      continue;
    }
    Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(b, b);
    gamma(ix, ix) = site_gamma(0, 0);
    gamma(ix, iy) = site_gamma(0, 1);
    gamma(iy, ix) = site_gamma(1, 0);
    gamma(iy, iy) = site_gamma(1, 1);
    model.pack_gamma(gamma, r, x);
  }
  return x;
}

VarianceRatioEstimate derivative_variance_ratio(std::size_t samples, double noise_sigma,
                                                std::uint64_t seed) {
  if (samples < 10000) {
    throw std::invalid_argument("derivative_variance_ratio needs at least 1e4 samples");
  }
  if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
  GaussianStream stream(seed);

  constexpr std::size_t kBatches = 20;
  const std::size_t per_batch = samples / kBatches;
  double ratio_sum = 0.0, ratio_sq_sum = 0.0;
  double total_v1 = 0.0, total_v2 = 0.0;

  for (std::size_t batch = 0; batch < kBatches; ++batch) {
    double s1 = 0.0, q1 = 0.0, s2 = 0.0, q2 = 0.0;
    for (std::size_t i = 0; i < per_batch; ++i) {
      const double a = noise_sigma * stream.next();  // <O(0)>
      const double b = noise_sigma * stream.next();  // <O(dt)>
      const double c = noise_sigma * stream.next();  // <O(2 dt)>
      const double d1 = b - a;                       // first-order stencil, dt = 1
      const double d2 = (-c + 4.0 * b - 3.0 * a) / 2.0;
      s1 += d1;
      q1 += d1 * d1;
      s2 += d2;
      q2 += d2 * d2;
    }
    const double n = double(per_batch);
    const double v1 = (q1 - s1 * s1 / n) / (n - 1.0);
    const double v2 = (q2 - s2 * s2 / n) / (n - 1.0);
    const double r = v2 / v1;
    ratio_sum += r;
    ratio_sq_sum += r * r;
    total_v1 += v1;
    total_v2 += v2;
  }

  VarianceRatioEstimate out;
  out.ratio = total_v2 / total_v1;
  const double mean_r = ratio_sum / kBatches;
  const double var_r =
      std::max(0.0, (ratio_sq_sum - kBatches * mean_r * mean_r) / (kBatches - 1.0));
  out.ci_half = 1.96 * std::sqrt(var_r / kBatches);
  return out;
}

}  // namespace hamlearn
