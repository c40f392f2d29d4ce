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

#include "hamlearn/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

namespace hamlearn {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

Eigen::Matrix2cd sigma_minus() {  // |0><1|, relaxation
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd sigma_plus() {  // |1><0|, excitation
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;
  return m;
}

void check_superoperator_size(Eigen::Index dim) {
  const Eigen::Index cap = Eigen::Index(1) << kMaxSuperoperatorSites;
  if (dim > cap) {
    throw std::invalid_argument("dense superoperator cap exceeded: dim " +
                                std::to_string(dim) + " > " + std::to_string(cap));
  }
}

}  // namespace

SpinChainSpec SpinChainSpec::uniform(std::size_t n_sites, const Eigen::Vector3d& field,
                                     double coupling, double g, double nbar) {
  SpinChainSpec spec;
  spec.n_sites = n_sites;
  spec.local_fields.assign(n_sites, field);
  spec.couplings.assign(n_sites > 0 ? n_sites - 1 : 0, coupling);
  spec.reservoir_coupling = g;
  spec.thermal_occupation = nbar;
  spec.validate();
  return spec;
}

void SpinChainSpec::validate() const {
  if (n_sites == 0) throw std::invalid_argument("chain needs at least one site");
  if (local_fields.size() != n_sites) {
    throw std::invalid_argument("expected " + std::to_string(n_sites) +
                                " local fields, got " + std::to_string(local_fields.size()));
  }
  if (couplings.size() != n_sites - 1) {
    throw std::invalid_argument("expected " + std::to_string(n_sites - 1) +
                                " couplings, got " + std::to_string(couplings.size()));
  }
  if (reservoir_coupling < 0.0) {
    throw std::invalid_argument("reservoir coupling g must be non-negative");
  }
  if (thermal_occupation < 0.0) {
    throw std::invalid_argument("thermal occupation nbar must be non-negative");
  }
}

DensityMatrix DensityMatrix::checked(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw std::invalid_argument("density matrix not Hermitian: deviation " +
                                std::to_string(herm));
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix trace differs from 1 by " +
                                std::to_string(std::abs(tr - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueFloor) {
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(min_eig) + " below floor");
  }
  return DensityMatrix(std::move(m));
}

void LindbladGenerator::validate(bool require_psd_gamma) const {
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw std::invalid_argument("Hamiltonian must be square");
  }
  if (hamiltonian.rows() != (Eigen::Index(1) << n_sites)) {
    throw std::invalid_argument("Hamiltonian dimension does not match site count");
  }
  for (const JumpTerm& term : jumps) {
    const auto b = static_cast<Eigen::Index>(term.ops.size());
    if (term.gamma.rows() != b || term.gamma.cols() != b) {
      throw std::invalid_argument("gamma block must be square over the jump basis");
    }
    for (const auto& op : term.ops) {
      if (op.rows() != dim() || op.cols() != dim()) {
        throw std::invalid_argument("jump operator dimension mismatch");
      }
    }
    if (require_psd_gamma) {
      const Eigen::MatrixXcd h = (term.gamma + term.gamma.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
      if ((term.gamma - h).cwiseAbs().maxCoeff() > 1e-10 ||
          es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("gamma block is not positive semi-definite");
      }
    }
  }
}

Eigen::MatrixXcd embed_single_site(const Eigen::Matrix2cd& op, std::size_t site,
                                   std::size_t n_sites) {
  if (site >= n_sites) throw std::invalid_argument("site index out of range");
  const Eigen::Index left = Eigen::Index(1) << site;
  const Eigen::Index right = Eigen::Index(1) << (n_sites - site - 1);
  Eigen::MatrixXcd out = Eigen::kroneckerProduct(
      Eigen::MatrixXcd::Identity(left, left), op);
  return Eigen::kroneckerProduct(out, Eigen::MatrixXcd::Identity(right, right));
}

Eigen::MatrixXcd build_hamiltonian(const SpinChainSpec& spec) {
  spec.validate();
  const Eigen::Index dim = Eigen::Index(1) << spec.n_sites;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  const Pauli axes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (std::size_t s = 0; s < spec.n_sites; ++s) {
    for (int a = 0; a < 3; ++a) {
      const double c = spec.local_fields[s](a);
      if (c != 0.0) h += c * embed_single_site(pauli_matrix(axes[a]), s, spec.n_sites);
    }
  }
  const Eigen::Matrix2cd x = pauli_matrix(Pauli::X);
  for (std::size_t s = 0; s + 1 < spec.n_sites; ++s) {
    if (spec.couplings[s] != 0.0) {
      h += spec.couplings[s] * (embed_single_site(x, s, spec.n_sites) *
                                embed_single_site(x, s + 1, spec.n_sites));
    }
  }
  return h;
}

Eigen::Matrix2cd thermal_pauli_gamma(double g_plus, double g_minus) {
  // sigma+ = (X - iY)/2 and sigma- = (X + iY)/2 expanded over (X, Y):
  // gamma = g_+ u u^dag + g_- v v^dag with u = (1, -i)/2, v = (1, i)/2.
  Eigen::Matrix2cd gamma;
  const double diag = (g_plus + g_minus) / 4.0;
  const Complex off = kImag * (g_plus - g_minus) / 4.0;
  gamma << diag, off, std::conj(off), diag;
  return gamma;
}

LindbladGenerator build_thermal_generator(const SpinChainSpec& spec, JumpBasisMode mode) {
  spec.validate();
  LindbladGenerator gen;
  gen.n_sites = spec.n_sites;
  gen.hamiltonian = build_hamiltonian(spec);

  const double g_plus = spec.excitation_rate();
  const double g_minus = spec.relaxation_rate();
  if (g_plus == 0.0 && g_minus == 0.0) return gen;  // purely Hamiltonian

  for (std::size_t s = 0; s < spec.n_sites; ++s) {
    JumpTerm term;
    term.sites = {s};
    if (mode == JumpBasisMode::Ladder) {
      std::vector<double> rates;
      if (g_plus > 0.0) {
        term.ops.push_back(embed_single_site(sigma_plus(), s, spec.n_sites));
        term.labels.push_back("sigma+@" + std::to_string(s));
        rates.push_back(g_plus);
      }
      if (g_minus > 0.0) {
        term.ops.push_back(embed_single_site(sigma_minus(), s, spec.n_sites));
        term.labels.push_back("sigma-@" + std::to_string(s));
        rates.push_back(g_minus);
      }
      term.gamma = Eigen::MatrixXcd::Zero(rates.size(), rates.size());
      for (std::size_t i = 0; i < rates.size(); ++i) term.gamma(i, i) = rates[i];
    } else {
      term.ops.push_back(embed_single_site(pauli_matrix(Pauli::X), s, spec.n_sites));
      term.ops.push_back(embed_single_site(pauli_matrix(Pauli::Y), s, spec.n_sites));
      term.labels.push_back("X@" + std::to_string(s));
      term.labels.push_back("Y@" + std::to_string(s));
      term.gamma = thermal_pauli_gamma(g_plus, g_minus);
    }
    gen.jumps.push_back(std::move(term));
  }
  gen.validate(/*require_psd_gamma=*/true);
  return gen;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v) {
  const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (dim * dim != v.size()) {
    throw std::invalid_argument("vector length is not a perfect square");
  }
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::MatrixXcd liouvillian_matrix(const LindbladGenerator& gen) {
  gen.validate();
  const Eigen::Index d = gen.dim();
  check_superoperator_size(d);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const Eigen::MatrixXcd& h = gen.hamiltonian;

  // Column stacking: vec(A rho B) = (B^T kron A) vec(rho).
  Eigen::MatrixXcd L = -kImag * (Eigen::kroneckerProduct(id, h).eval() -
                                 Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const JumpTerm& term : gen.jumps) {
    const auto b = term.ops.size();
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = 0; m < b; ++m) {
        const Complex g = term.gamma(n, m);
        if (g == 0.0) continue;
        const Eigen::MatrixXcd& ln = term.ops[n];
        const Eigen::MatrixXcd& lm = term.ops[m];
        const Eigen::MatrixXcd lm_dag_ln = lm.adjoint() * ln;
        L += g * Eigen::kroneckerProduct(lm.conjugate(), ln).eval();
        L -= 0.5 * g * Eigen::kroneckerProduct(id, lm_dag_ln).eval();
        L -= 0.5 * g * Eigen::kroneckerProduct(lm_dag_ln.transpose(), id).eval();
      }
    }
  }
  return L;
}

Eigen::MatrixXcd adjoint_apply(const LindbladGenerator& gen, const Eigen::MatrixXcd& o) {
  if (o.rows() != gen.dim() || o.cols() != gen.dim()) {
    throw std::invalid_argument("observable dimension mismatch");
  }
  const Eigen::MatrixXcd& h = gen.hamiltonian;
  Eigen::MatrixXcd out = -kImag * (o * h - h * o);
  for (const JumpTerm& term : gen.jumps) {
    const auto b = term.ops.size();
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = 0; m < b; ++m) {
        const Complex g = term.gamma(n, m);
        if (g == 0.0) continue;
        const Eigen::MatrixXcd& ln = term.ops[n];
        const Eigen::MatrixXcd lm_dag = term.ops[m].adjoint();
        const Eigen::MatrixXcd lm_dag_ln = lm_dag * ln;
        out += g * (lm_dag * o * ln - 0.5 * (lm_dag_ln * o + o * lm_dag_ln));
      }
    }
  }
  return out;
}

namespace {

// Least-squares polish for a steady-state candidate: minimise ||L y|| with
// the trace pinned by an appended weighted row.
Eigen::MatrixXcd polish_fixed_point(const Eigen::MatrixXcd& L, Eigen::Index d) {
  const Eigen::Index D = d * d;
  const double w = std::max(L.norm() / std::sqrt(double(d)), 1.0);
  Eigen::MatrixXcd aug(D + 1, D);
  aug.topRows(D) = L;
  aug.row(D).setZero();
  for (Eigen::Index k = 0; k < d; ++k) aug(D, k * d + k) = w;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(D + 1);
  rhs(D) = w;
  const Eigen::VectorXcd y = aug.colPivHouseholderQr().solve(rhs);
  return unvectorize(y);
}

}  // namespace

DensityMatrix steady_state(const LindbladGenerator& gen) {
  const Eigen::MatrixXcd L = liouvillian_matrix(gen);
  const Eigen::Index d = gen.dim();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(L, /*computeEigenvectors=*/true);
  if (ces.info() != Eigen::Success) {
    throw std::runtime_error("Liouvillian eigendecomposition failed");
  }
  const Eigen::VectorXcd& evals = ces.eigenvalues();
  Eigen::Index i_min = 0, i_second = 1;
  if (std::abs(evals(i_second)) < std::abs(evals(i_min))) std::swap(i_min, i_second);
  for (Eigen::Index i = 2; i < evals.size(); ++i) {
    const double a = std::abs(evals(i));
    if (a < std::abs(evals(i_min))) {
      i_second = i_min;
      i_min = i;
    } else if (a < std::abs(evals(i_second))) {
      i_second = i;
    }
  }
  const double scale = evals.cwiseAbs().maxCoeff();
  if (scale <= std::numeric_limits<double>::min()) {
    throw NonUniqueFixedPointError("zero generator has no unique fixed point");
  }
  if (std::abs(evals(i_second)) < 1e-8 * scale) {
    throw NonUniqueFixedPointError(
        "Liouvillian kernel is degenerate or near-degenerate (second eigenvalue " +
        std::to_string(std::abs(evals(i_second))) + ", scale " + std::to_string(scale) + ")");
  }

  Eigen::MatrixXcd m = unvectorize(ces.eigenvectors().col(i_min));
  const Complex tr = m.trace();
  if (std::abs(tr) < 1e-12 * m.norm()) {
    throw NonUniqueFixedPointError("kernel vector is traceless, not a state");
  }
  m /= tr;
  Eigen::MatrixXcd rho = (m + m.adjoint()) / 2.0;
  rho /= rho.trace().real();

  double residual = (L * vectorize(rho)).norm();
  if (residual > 1e-10) {
    Eigen::MatrixXcd y = polish_fixed_point(L, d);
    y /= y.trace();
    Eigen::MatrixXcd candidate = (y + y.adjoint()) / 2.0;
    candidate /= candidate.trace().real();
    const double polished = (L * vectorize(candidate)).norm();
    if (polished < residual) {
      rho = std::move(candidate);
      residual = polished;
    }
  }
  if (residual > 1e-10) {
    throw std::runtime_error("steady-state residual " + std::to_string(residual) +
                             " exceeds 1e-10");
  }
  return DensityMatrix::checked(std::move(rho));
}

Propagator::Propagator(const LindbladGenerator& gen, double t) : t_(t) {
  if (t < 0.0) throw std::invalid_argument("propagation time must be non-negative");
  const Eigen::MatrixXcd L = liouvillian_matrix(gen);
  exp_lt_ = (L * t).exp();
}

Eigen::MatrixXcd Propagator::apply_matrix(const Eigen::MatrixXcd& rho) const {
  if (rho.size() != exp_lt_.cols() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("state dimension mismatch in Propagator");
  }
  const Eigen::MatrixXcd out = unvectorize(exp_lt_ * vectorize(rho));
  return (out + out.adjoint()) / 2.0;
}

DensityMatrix Propagator::apply(const DensityMatrix& rho) const {
  return DensityMatrix::checked(apply_matrix(rho.matrix()));
}

DensityMatrix propagate(const LindbladGenerator& gen, const DensityMatrix& rho0, double t) {
  if (t == 0.0) return rho0;
  return Propagator(gen, t).apply(rho0);
}

double expectation(const DensityMatrix& rho, const Eigen::MatrixXcd& o) {
  if (o.rows() != rho.dim() || o.cols() != rho.dim()) {
    throw std::invalid_argument("observable dimension mismatch");
  }
  const double scale = std::max(1.0, o.cwiseAbs().maxCoeff());
  if ((o - o.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("observable is not Hermitian");
  }
  // Tr[rho O] without forming the product matrix.
  const Complex value = (rho.matrix().transpose().cwiseProduct(o)).sum();
  if (std::abs(value.imag()) > 1e-11) {
    throw std::runtime_error("expectation has imaginary part " +
                             std::to_string(value.imag()));
  }
  return value.real();
}

std::vector<DensityMatrix> conjugated_state_set(const DensityMatrix& rho_ss,
                                                const std::vector<PauliString>& unitaries) {
  std::vector<DensityMatrix> states;
  states.reserve(unitaries.size() + 1);
  states.push_back(rho_ss);
  for (const PauliString& u : unitaries) {
    if ((Eigen::Index(1) << u.n_sites()) != rho_ss.dim()) {
      throw std::invalid_argument("conjugating unitary acts on wrong number of sites");
    }
    if (u.is_identity()) continue;  // already first in the list
    const Eigen::MatrixXcd um = to_dense(u);
    states.push_back(DensityMatrix::checked(um * rho_ss.matrix() * um));
  }
  return states;
}

}  // namespace hamlearn
