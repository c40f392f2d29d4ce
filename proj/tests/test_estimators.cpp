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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <complex>
#include <random>
#include <sstream>

#include "hamlearn/estimators.hpp"
#include "hamlearn/random.hpp"

using namespace hamlearn;
using Complex = std::complex<double>;

namespace {

const Eigen::Vector3d kRefField{0.5, 0.0, -2.55};
constexpr double kRefCoupling = 0.25;
constexpr double kRefG = 0.05;

// Dense generator for arbitrary model coordinates; the independent route
// used to validate the symbolic row assembly.
LindbladGenerator generator_from_coordinates(const ModelSpace& model,
                                             const Eigen::VectorXd& x) {
  LindbladGenerator gen;
  gen.n_sites = model.n_sites();
  const Eigen::Index dim = Eigen::Index(1) << model.n_sites();
  gen.hamiltonian = Eigen::MatrixXcd::Zero(dim, dim);
  const auto& terms = model.hamiltonian_terms();
  for (std::size_t l = 0; l < terms.size(); ++l) {
    if (x(static_cast<Eigen::Index>(l)) != 0.0) {
      gen.hamiltonian += x(static_cast<Eigen::Index>(l)) * to_dense(terms[l]);
    }
  }
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    JumpTerm term;
    term.sites = {model.regions()[r].site};
    for (const PauliString& p : model.regions()[r].jump_basis) {
      term.ops.push_back(to_dense(p));
      term.labels.push_back(p.str());
    }
    term.gamma = model.unpack_gamma(x, r);
    gen.jumps.push_back(std::move(term));
  }
  return gen;
}

DensityMatrix random_density(std::mt19937& rng, Eigen::Index dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXcd b(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) b(i, j) = Complex{dist(rng), dist(rng)};
  }
  Eigen::MatrixXcd rho = b * b.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::checked((rho + rho.adjoint()) / 2.0);
}

// Minimal homogeneous test system around a raw matrix.
CorrelationSystem raw_system(const Eigen::MatrixXd& m) {
  CorrelationSystem sys;
  sys.matrix = m;
  sys.hamiltonian_dim = static_cast<std::size_t>(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) sys.col_labels.push_back("c" + std::to_string(c));
  for (Eigen::Index r = 0; r < m.rows(); ++r) sys.row_labels.push_back({"row", int(r), 'r'});
  return sys;
}

CorrelationSystem raw_dynamical(const Eigen::MatrixXd& m, const Eigen::VectorXd& w) {
  CorrelationSystem sys = raw_system(m);
  sys.dynamical = true;
  sys.rhs = w;
  return sys;
}

}  // namespace

TEST_CASE("model dimensions match the parameter counts") {
  CHECK(ModelSpace::build(5, 2).dimension() == 141);  // 51 + 5 * 18
  CHECK(ModelSpace::build(5, 2).hamiltonian_dimension() == 51);
  CHECK(ModelSpace::build(3, 2).dimension() == 81);  // 27 + 3 * 18
  CHECK(ModelSpace::build(2, 2).dimension() == 51);  // 15 + 2 * 18
  CHECK(ModelSpace::build(5, 2, GammaConstraint::Hermitian).dimension() == 96);  // 51 + 5 * 9
  CHECK(ModelSpace::build(3, 2, GammaConstraint::UnconstrainedComplex, false).dimension() == 27);
  CHECK(ModelSpace::build(5, 2).column_labels().size() == 141);
}

TEST_CASE("gamma pack/unpack round-trips") {
  std::mt19937 rng(3);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto constraint : {GammaConstraint::UnconstrainedComplex, GammaConstraint::Hermitian}) {
    const ModelSpace model = ModelSpace::build(2, 2, constraint);
    Eigen::VectorXd x(model.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = dist(rng);
    for (std::size_t r = 0; r < model.regions().size(); ++r) {
      Eigen::MatrixXcd gamma = model.unpack_gamma(x, r);
      if (constraint == GammaConstraint::Hermitian) {
        CHECK((gamma - gamma.adjoint()).norm() <= 1e-14);
      }
      Eigen::VectorXd y = Eigen::VectorXd::Zero(model.dimension());
      model.pack_gamma(gamma, r, y);
      CHECK((model.unpack_gamma(y, r) - gamma).norm() <= 1e-14);
    }
  }
}

TEST_CASE("structural rows match the dense adjoint route") {
  std::mt19937 rng(5);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t n : {1u, 2u, 3u}) {
    const ModelSpace model = ModelSpace::build(n, 2);
    Eigen::VectorXd x(model.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = dist(rng);
    const LindbladGenerator gen = generator_from_coordinates(model, x);

    const auto rho = random_density(rng, Eigen::Index(1) << n);
    PauliExpectationCache cache(rho.matrix());
    for (const PauliString& input : enumerate_basis({n, n, true})) {
      const StructuralRow row = structural_row(cache, input, model);
      const Complex from_row = (row.entries.array() * x.array().cast<Complex>()).sum();
      const Complex from_dense =
          (rho.matrix() * adjoint_apply(gen, to_dense(input))).trace();
      CHECK(std::abs(from_row - from_dense) <= 1e-11);
    }
  }
}

TEST_CASE("expectation cache agrees with dense traces") {
  std::mt19937 rng(7);
  const auto rho = random_density(rng, 8);
  PauliExpectationCache cache(rho.matrix());
  for (const PauliString& p : enumerate_basis({3, 3, true})) {
    const double dense = (rho.matrix() * to_dense(p)).trace().real();
    CHECK(std::abs(cache.value(p) - dense) <= 1e-13);
  }
  CHECK(cache.value(PauliString(3)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("steady assembly annihilates the true coordinates") {
  for (std::size_t n : {2u, 3u}) {
    const auto spec = SpinChainSpec::uniform(n, kRefField, kRefCoupling, kRefG, 0.0);
    const ModelSpace model = ModelSpace::build(n, 2);
    const auto gen = build_thermal_generator(spec, JumpBasisMode::Pauli);
    const auto rho = steady_state(gen);
    const auto inputs = enumerate_basis({n, std::min<std::size_t>(4, n), true});
    const CorrelationSystem sys = assemble_steady(rho, inputs, model);
    const Eigen::VectorXd x_true = true_model_vector(spec, model);
    CHECK((sys.matrix * x_true).norm() / x_true.norm() <= 1e-9);
  }
}

TEST_CASE("true_model_vector lays out the chain couplings") {
  const auto spec = SpinChainSpec::uniform(2, kRefField, kRefCoupling, kRefG, 0.5);
  const ModelSpace model = ModelSpace::build(2, 2);
  const Eigen::VectorXd x = true_model_vector(spec, model);
  const auto& terms = model.hamiltonian_terms();
  for (std::size_t l = 0; l < terms.size(); ++l) {
    const std::string s = terms[l].str();
    const double v = x(static_cast<Eigen::Index>(l));
    if (s == "XI" || s == "IX") CHECK(v == 0.5);
    else if (s == "ZI" || s == "IZ") CHECK(v == -2.55);
    else if (s == "XX") CHECK(v == 0.25);
    else CHECK(v == 0.0);
  }
  // Per-site gamma block: diag (g_+ + g_-)/4 over {X, Y}, zero elsewhere.
  const double gp = spec.excitation_rate(), gm = spec.relaxation_rate();
  const Eigen::MatrixXcd gamma = model.unpack_gamma(x, 0);
  CHECK(gamma(0, 0) == Complex{(gp + gm) / 4.0, 0.0});
  CHECK(gamma(1, 1) == Complex{(gp + gm) / 4.0, 0.0});
  CHECK(gamma(0, 1) == Complex{0.0, (gp - gm) / 4.0});
  CHECK(gamma(1, 0) == Complex{0.0, (gm - gp) / 4.0});
  CHECK(gamma(2, 2) == Complex{0.0, 0.0});
}

TEST_CASE("degenerate single-qubit probe drops every row") {
  // Probing Z against the pure-Hamiltonian {X, Y, Z} model on |0><0|:
  // <[Z,X]> ~ <Y> = 0 and <[Z,Y]> ~ <X> = 0, so the whole structural row
  // vanishes, nothing survives the filter, and the null-vector solver
  // rejects the empty system.
  const ModelSpace model =
      ModelSpace::build(1, 1, GammaConstraint::UnconstrainedComplex, false);
  Eigen::MatrixXcd ground = Eigen::MatrixXcd::Zero(2, 2);
  ground(0, 0) = 1.0;
  const auto rho = DensityMatrix::checked(ground);
  const CorrelationSystem sys =
      assemble_steady(rho, {PauliString::parse("Z")}, model);
  CHECK(sys.rows() == 0);
  CHECK_THROWS_AS(svd_null_estimator(sys), std::invalid_argument);
}

TEST_CASE("svd_null_estimator on explicit matrices") {
  SUBCASE("rank-deficient 2x2") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 0, 0, 0;
    const EstimationReport report = svd_null_estimator(raw_system(m));
    CHECK(report.s0 == 0.0);
    CHECK(report.gap == 1.0);
    CHECK_FALSE(report.ambiguous);
    CHECK(std::abs(report.x_est(0)) <= 1e-15);
    CHECK(report.x_est(1) == 1.0);  // sign-fixed positive
  }
  SUBCASE("degenerate spectrum is flagged ambiguous") {
    const EstimationReport report = svd_null_estimator(raw_system(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(report.s0 == doctest::Approx(1.0));
    CHECK(report.gap == doctest::Approx(0.0));
    CHECK(report.ambiguous);
  }
  SUBCASE("wide systems pad the spectrum with exact zeros") {
    Eigen::MatrixXd m(1, 3);
    m << 1, 0, 0;
    const EstimationReport report = svd_null_estimator(raw_system(m));
    CHECK(report.singular_values.size() == 3);
    CHECK(report.s0 == 0.0);
    CHECK(report.gap == 0.0);
    CHECK(report.ambiguous);  // two-dimensional kernel
    CHECK((m * report.x_est).norm() <= 1e-14);
  }
  SUBCASE("homogeneous precondition") {
    CHECK_THROWS_AS(svd_null_estimator(raw_dynamical(Eigen::MatrixXd::Identity(2, 2),
                                                     Eigen::VectorXd::Ones(2))),
                    std::invalid_argument);
  }
}

TEST_CASE("steady-state recovery on the reference 3-site chain") {
  const auto spec = SpinChainSpec::uniform(3, kRefField, kRefCoupling, kRefG, 0.0);
  const ModelSpace model = ModelSpace::build(3, 2);
  const auto rho = steady_state(build_thermal_generator(spec, JumpBasisMode::Pauli));
  const CorrelationSystem sys =
      assemble_steady(rho, enumerate_basis({3, 3, true}), model);
  const EstimationReport report = svd_null_estimator(sys);
  const Eigen::VectorXd x_true = true_model_vector(spec, model);
  const SectorErrors err = error_metrics(x_true, report.x_est, model, ErrorScaling::Scaled);
  CHECK(err.delta_H <= 1e-6);
  CHECK(err.delta_HL <= 1e-6);
  CHECK_FALSE(report.ambiguous);
}

TEST_CASE("least_squares_estimator recovers exact solutions") {
  std::mt19937 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  SUBCASE("square invertible") {
    Eigen::MatrixXd m(3, 3);
    m << 2, 1, 0, 0, 3, 1, 1, 0, 1;
    Eigen::VectorXd x_true(3);
    x_true << 1.5, -2.0, 0.5;
    const EstimationReport report = least_squares_estimator(raw_dynamical(m, m * x_true));
    CHECK((report.x_est - x_true).norm() <= 1e-12);
    CHECK(report.rank == 3);
  }
  SUBCASE("overdetermined consistent") {
    Eigen::MatrixXd m(20, 4);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i / 4, i % 4) = dist(rng);
    Eigen::VectorXd x_true(4);
    x_true << 1, 2, 3, 4;
    const EstimationReport report = least_squares_estimator(raw_dynamical(m, m * x_true));
    CHECK((report.x_est - x_true).norm() <= 1e-12);
  }
  SUBCASE("rank deficiency reported in metadata") {
    Eigen::MatrixXd m(3, 3);
    m << 1, 1, 0, 1, 1, 0, 0, 0, 1;  // rank 2
    const EstimationReport report =
        least_squares_estimator(raw_dynamical(m, Eigen::VectorXd::Ones(3)));
    CHECK(report.rank == 2);
  }
}

TEST_CASE("psd_constrained_estimator") {
  const auto spec = SpinChainSpec::uniform(2, kRefField, kRefCoupling, kRefG, 0.3);
  const ModelSpace model = ModelSpace::build(2, 2);
  const auto gen = build_thermal_generator(spec, JumpBasisMode::Pauli);
  const auto rho_ss = steady_state(gen);
  const auto states = conjugated_state_set(rho_ss, enumerate_basis({2, 1, true}));
  const auto inputs = enumerate_basis({2, 2, true});
  const CorrelationSystem sys =
      assemble_dynamical(states, inputs, gen, 1e-3, 1, model);

  SUBCASE("zero rhs gives the zero solution") {
    CorrelationSystem zero = sys;
    zero.rhs.setZero();
    const EstimationReport report = psd_constrained_estimator(zero, model);
    CHECK(report.x_est.norm() <= 1e-12);
    CHECK(report.converged);
  }
  SUBCASE("feasibility and closeness to least squares at tiny dt") {
    const EstimationReport lsq = least_squares_estimator(sys);
    const EstimationReport psd = psd_constrained_estimator(sys, model);
    CHECK(psd.converged);
    CHECK(psd.min_gamma_eigenvalue >= -1e-9);
    CHECK(psd.residual >= lsq.residual - 1e-12);  // constrained cannot beat unconstrained
  }
  SUBCASE("inactive constraints reproduce the least-squares optimum") {
    // Synthetic full-rank system whose unconstrained optimum is PSD:
    // target coordinates with PSD gamma blocks.
    std::mt19937 rng(13);
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd x_true = Eigen::VectorXd::Zero(model.dimension());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(model.hamiltonian_dimension()); ++i) {
      x_true(i) = dist(rng);
    }
    for (std::size_t r = 0; r < model.regions().size(); ++r) {
      Eigen::MatrixXcd b(3, 3);
      for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) b(i, j) = Complex{dist(rng), dist(rng)};
      }
      model.pack_gamma(b * b.adjoint() / 3.0, r, x_true);  // strictly PSD block
    }
    Eigen::MatrixXd m(3 * model.dimension(), model.dimension());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
    }
    CorrelationSystem full = raw_dynamical(m, m * x_true);
    full.hamiltonian_dim = model.hamiltonian_dimension();
    const EstimationReport lsq = least_squares_estimator(full);
    const EstimationReport psd = psd_constrained_estimator(full, model);
    CHECK((lsq.x_est - x_true).norm() <= 1e-9);
    CHECK((psd.x_est - lsq.x_est).norm() <= 1e-6);
  }
}

TEST_CASE("dynamical assembly basics") {
  SUBCASE("zero generator gives zero rhs solved by zero") {
    LindbladGenerator gen;
    gen.n_sites = 2;
    gen.hamiltonian = Eigen::MatrixXcd::Zero(4, 4);
    std::mt19937 rng(17);
    const ModelSpace model = ModelSpace::build(2, 2);
    const std::vector<DensityMatrix> states = {random_density(rng, 4),
                                               random_density(rng, 4)};
    const CorrelationSystem sys =
        assemble_dynamical(states, enumerate_basis({2, 2, true}), gen, 1e-2, 1, model);
    CHECK(sys.rhs.cwiseAbs().maxCoeff() <= 1e-12);
    const EstimationReport report = least_squares_estimator(sys);
    CHECK(report.x_est.norm() <= 1e-9);
  }
  SUBCASE("single-qubit precession matches the analytic derivative") {
    const double cz = -2.55;
    LindbladGenerator gen;
    gen.n_sites = 1;
    gen.hamiltonian = cz * to_dense(PauliString::parse("Z"));
    Eigen::MatrixXcd plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;  // |+><+|
    const auto rho = DensityMatrix::checked(plus);
    const ModelSpace model = ModelSpace::build(1, 1);
    for (int order : {1, 2}) {
      const double dt = 1e-3;
      const CorrelationSystem sys = assemble_dynamical(
          {rho}, {PauliString::parse("Y")}, gen, dt, order, model);
      REQUIRE(sys.rows() >= 1);
      REQUIRE(sys.row_labels[0].part == 'r');
      // d<Y>/dt = 2 c_z <X> = 2 c_z at t = 0.
      const double exact = 2.0 * cz;
      const double tolerance = order == 1 ? 50.0 * dt : 200.0 * dt * dt;
      CHECK(std::abs(sys.rhs(0) - exact) <= tolerance);
    }
  }
  SUBCASE("input validation") {
    LindbladGenerator gen;
    gen.n_sites = 1;
    gen.hamiltonian = Eigen::MatrixXcd::Zero(2, 2);
    std::mt19937 rng(19);
    const ModelSpace model = ModelSpace::build(1, 1);
    const std::vector<DensityMatrix> states = {random_density(rng, 2)};
    const auto inputs = enumerate_basis({1, 1, true});
    CHECK_THROWS_AS(assemble_dynamical(states, inputs, gen, 0.0, 1, model),
                    std::invalid_argument);
    CHECK_THROWS_AS(assemble_dynamical(states, inputs, gen, 1e-3, 3, model),
                    std::invalid_argument);
    CHECK_THROWS_AS(assemble_dynamical({}, inputs, gen, 1e-3, 1, model),
                    std::invalid_argument);
  }
}

TEST_CASE("finite-difference truth residual shrinks with order") {
  const auto spec = SpinChainSpec::uniform(2, kRefField, kRefCoupling, kRefG, 0.0);
  const ModelSpace model = ModelSpace::build(2, 2);
  const auto gen = build_thermal_generator(spec, JumpBasisMode::Pauli);
  const auto rho_ss = steady_state(gen);
  const auto states = conjugated_state_set(rho_ss, enumerate_basis({2, 1, true}));
  const auto inputs = enumerate_basis({2, 2, true});
  const Eigen::VectorXd x_true = true_model_vector(spec, model);

  auto residual = [&](double dt, int order) {
    const CorrelationSystem sys = assemble_dynamical(states, inputs, gen, dt, order, model);
    return (sys.matrix * x_true - sys.rhs).norm();
  };

  const double dt = 1e-2;
  const double r1 = residual(dt, 1);
  const double r2 = residual(dt, 2);
  CHECK(r2 < r1);  // second order is more accurate at fixed dt

  // Quartering dt shrinks the residual by ~4 (order 1) and ~16 (order 2).
  const double ratio1 = r1 / residual(dt / 4.0, 1);
  const double ratio2 = r2 / residual(dt / 4.0, 2);
  CHECK(ratio1 == doctest::Approx(4.0).epsilon(0.25));
  CHECK(ratio2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("inject_noise") {
  const auto spec = SpinChainSpec::uniform(2, kRefField, kRefCoupling, kRefG, 0.0);
  const ModelSpace model = ModelSpace::build(2, 2);
  const auto rho = steady_state(build_thermal_generator(spec, JumpBasisMode::Pauli));
  const CorrelationSystem clean = assemble_steady(rho, enumerate_basis({2, 2, true}), model);

  SUBCASE("sigma 0 is the identity") {
    const CorrelationSystem same = inject_noise(clean, 0.0, 99);
    CHECK((same.matrix - clean.matrix).norm() == 0.0);
  }
  SUBCASE("fixed seed repeats bit-identically; clean system untouched") {
    const Eigen::MatrixXd before = clean.matrix;
    const CorrelationSystem a = inject_noise(clean, 1e-3, 42);
    const CorrelationSystem b = inject_noise(clean, 1e-3, 42);
    CHECK((a.matrix - b.matrix).norm() == 0.0);
    CHECK((clean.matrix - before).norm() == 0.0);
    const CorrelationSystem c = inject_noise(clean, 1e-3, 43);
    CHECK((a.matrix - c.matrix).norm() != 0.0);
  }
  SUBCASE("sample statistics match the requested distribution") {
    // 400x250 zero matrix: the noisy entries are the draws themselves.
    CorrelationSystem zeros = raw_system(Eigen::MatrixXd::Zero(400, 250));
    const double sigma = 0.7;
    const CorrelationSystem noisy = inject_noise(zeros, sigma, 7);
    const double n = 400.0 * 250.0;
    const double mean = noisy.matrix.sum() / n;
    const double var = (noisy.matrix.array() - mean).square().sum() / (n - 1.0);
    CHECK(std::abs(mean) <= 3.0 * sigma / std::sqrt(n));
    CHECK(std::abs(var - sigma * sigma) <=
          3.0 * sigma * sigma * std::sqrt(2.0 / n));
  }
}

TEST_CASE("error_metrics") {
  const ModelSpace model = ModelSpace::build(2, 2);
  std::mt19937 rng(23);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd x_true(model.dimension());
  for (Eigen::Index i = 0; i < x_true.size(); ++i) x_true(i) = dist(rng);

  SUBCASE("exact estimate") {
    const SectorErrors e = error_metrics(x_true, x_true, model, ErrorScaling::Absolute);
    CHECK(e.delta_H == 0.0);
    CHECK(e.delta_HL == 0.0);
    CHECK(e.delta_env == 0.0);
  }
  SUBCASE("scaled mode forgives an overall factor") {
    const SectorErrors e =
        error_metrics(x_true, (2.0 * x_true).eval(), model, ErrorScaling::Scaled);
    CHECK(e.delta_H <= 1e-14);
    CHECK(e.delta_HL <= 1e-14);
  }
  SUBCASE("unit perturbation of the first Hamiltonian coordinate") {
    Eigen::VectorXd x_est = x_true;
    const double h_norm = x_true.head(model.hamiltonian_dimension()).norm();
    x_est(0) += h_norm;
    const SectorErrors e = error_metrics(x_true, x_est, model, ErrorScaling::Absolute);
    CHECK(e.delta_H == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero-norm truth sector is rejected") {
    Eigen::VectorXd zero_h = x_true;
    zero_h.head(model.hamiltonian_dimension()).setZero();
    CHECK_THROWS_AS(error_metrics(zero_h, x_true, model, ErrorScaling::Absolute),
                    std::invalid_argument);
  }
}

TEST_CASE("measurement complexity") {
  // Pure-Hamiltonian single-qubit model over {X, Y, Z}: probing with Z
  // against the Z term needs nothing; X and Y need one observable each.
  const ModelSpace model = ModelSpace::build(1, 1, GammaConstraint::UnconstrainedComplex,
                                             /*with_dissipator=*/false);
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  const auto rho = DensityMatrix::checked(mixed);

  // Model {X, Y, Z}: [X,Y] ~ Z, [X,Z] ~ Y, [Y,Z] ~ X; every single probe
  // operator O needs the two observables it does not commute with.
  const CorrelationSystem one =
      assemble_steady(rho, {PauliString::parse("X")}, model);
  CHECK(measurement_complexity(one) == 2);  // {Z, Y}

  const CorrelationSystem dup = assemble_steady(
      rho, {PauliString::parse("X"), PauliString::parse("X")}, model);
  CHECK(measurement_complexity(dup) == 2);  // duplicates add nothing

  // Growth is monotone as inputs are appended.
  SteadyRowBuilder builder(rho, model);
  std::size_t previous = 0;
  for (const auto& input : enumerate_basis({1, 1, true})) {
    builder.add_input(input);
    CHECK(builder.measured_count() >= previous);
    previous = builder.measured_count();
  }
  CHECK(previous == 3);  // {X, Y, Z} all needed eventually
}

TEST_CASE("derivative variance ratio") {
  const VarianceRatioEstimate est = derivative_variance_ratio(1000000, 0.1, 2024);
  CHECK(std::abs(est.ratio - 3.25) <= 0.02 * 3.25);
  CHECK(est.ci_half > 0.0);

  // Scale invariance and determinism.
  const VarianceRatioEstimate other_sigma = derivative_variance_ratio(200000, 2.5, 2024);
  CHECK(std::abs(other_sigma.ratio - 3.25) <= 0.05 * 3.25);
  const VarianceRatioEstimate repeat = derivative_variance_ratio(1000000, 0.1, 2024);
  CHECK(repeat.ratio == est.ratio);

  CHECK_THROWS_AS(derivative_variance_ratio(100, 0.1, 1), std::invalid_argument);
}

TEST_CASE("correlation system serialisation round-trips") {
  const auto spec = SpinChainSpec::uniform(2, kRefField, kRefCoupling, kRefG, 0.4);
  const ModelSpace model = ModelSpace::build(2, 2);
  const auto gen = build_thermal_generator(spec, JumpBasisMode::Pauli);
  const auto rho = steady_state(gen);

  SUBCASE("homogeneous") {
    const CorrelationSystem sys = assemble_steady(rho, enumerate_basis({2, 2, true}), model);
    std::stringstream buffer;
    sys.write(buffer);
    const CorrelationSystem back = CorrelationSystem::read(buffer);
    CHECK(back.dynamical == sys.dynamical);
    CHECK(back.hamiltonian_dim == sys.hamiltonian_dim);
    CHECK(back.col_labels == sys.col_labels);
    CHECK((back.matrix - sys.matrix).norm() == 0.0);
    CHECK(back.measured_operators == sys.measured_operators);
  }
  SUBCASE("dynamical, including rhs") {
    const auto states = conjugated_state_set(rho, enumerate_basis({2, 1, true}));
    const CorrelationSystem sys =
        assemble_dynamical(states, enumerate_basis({2, 2, true}), gen, 1e-2, 2, model);
    std::stringstream buffer;
    sys.write(buffer);
    const CorrelationSystem back = CorrelationSystem::read(buffer);
    CHECK((back.matrix - sys.matrix).norm() == 0.0);
    CHECK((back.rhs - sys.rhs).norm() == 0.0);
    CHECK(back.row_labels.size() == sys.row_labels.size());
    for (std::size_t i = 0; i < back.row_labels.size(); ++i) {
      CHECK(back.row_labels[i].input_op == sys.row_labels[i].input_op);
      CHECK(back.row_labels[i].state_id == sys.row_labels[i].state_id);
      CHECK(back.row_labels[i].part == sys.row_labels[i].part);
    }
  }
}

TEST_CASE("estimation report serialises to parseable JSON") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, 0;
  const EstimationReport report = svd_null_estimator(raw_system(m));
  const nlohmann::json j = nlohmann::json::parse(report.to_json());
  CHECK(j["solver"] == "svd-null");
  CHECK(j["s0"] == 0.0);
  CHECK(j["x_est"].size() == 2);
}
