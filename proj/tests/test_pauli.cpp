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

#include <complex>
#include <random>
#include <set>

#include "hamlearn/pauli.hpp"

using namespace hamlearn;
using Complex = std::complex<double>;

namespace {

// Independent dense oracle: hand-written 2x2 matrices and Kronecker
// product, deliberately not using the library's to_dense path.
Eigen::Matrix2cd oracle_site(Pauli p) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (p) {
    case Pauli::I: m(0, 0) = 1; m(1, 1) = 1; break;
    case Pauli::X: m(0, 1) = 1; m(1, 0) = 1; break;
    case Pauli::Y: m(0, 1) = -i; m(1, 0) = i; break;
    case Pauli::Z: m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

Eigen::MatrixXcd oracle_kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd oracle_dense(const PauliString& p) {
  Eigen::MatrixXcd out = oracle_site(p.at(0));
  for (std::size_t s = 1; s < p.n_sites(); ++s) {
    out = oracle_kron(out, oracle_site(p.at(s)));
  }
  return out;
}

Eigen::MatrixXcd oracle_dense(const WeightedPauliSum& sum) {
  const Eigen::Index dim = Eigen::Index(1) << sum.n_sites();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [term, coeff] : sum.terms()) out += coeff * oracle_dense(term);
  return out;
}

PauliString random_string(std::mt19937& rng, std::size_t n_sites) {
  std::uniform_int_distribution<int> dist(0, 3);
  std::vector<Pauli> symbols(n_sites);
  for (auto& s : symbols) s = static_cast<Pauli>(dist(rng));
  return PauliString(std::move(symbols));
}

}  // namespace

TEST_CASE("text format round-trips exactly") {
  for (const char* text : {"X", "XIZYI", "IIII", "ZZZZZZ"}) {
    CHECK(PauliString::parse(text).str() == text);
  }
  CHECK_THROWS_AS(PauliString::parse("XQZ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse("xyz"), std::invalid_argument);
}

TEST_CASE("pauli_mul single-site relations") {
  const auto x = PauliString::parse("X");
  const auto y = PauliString::parse("Y");

  auto xy = pauli_mul(x, y);
  CHECK(xy.string.str() == "Z");
  CHECK(xy.phase() == Complex{0.0, 1.0});  // XY = iZ

  auto xx = pauli_mul(x, x);
  CHECK(xx.string.str() == "I");
  CHECK(xx.phase() == Complex{1.0, 0.0});
}

TEST_CASE("pauli_mul two-site example against the dense oracle") {
  const auto p = PauliString::parse("XZ");
  const auto q = PauliString::parse("YZ");
  const auto prod = pauli_mul(p, q);
  CHECK(prod.string.str() == "ZI");
  CHECK(prod.phase() == Complex{0.0, 1.0});
  const Eigen::MatrixXcd expected = oracle_dense(p) * oracle_dense(q);
  CHECK((prod.phase() * oracle_dense(prod.string) - expected).norm() == 0.0);
}

TEST_CASE("pauli_mul rejects size mismatch") {
  CHECK_THROWS_AS(pauli_mul(PauliString::parse("X"), PauliString::parse("XX")),
                  std::invalid_argument);
  CHECK_THROWS_AS(commutator(PauliString::parse("XY"), PauliString::parse("X")),
                  std::invalid_argument);
  CHECK_THROWS_AS(anticommutator(PauliString::parse("XY"), PauliString::parse("X")),
                  std::invalid_argument);
}

TEST_CASE("commutator basics") {
  const auto x = PauliString::parse("X");
  const auto y = PauliString::parse("Y");
  const auto z = PauliString::parse("Z");

  auto c = commutator(x, y);
  REQUIRE(c.size() == 1);
  CHECK(c.coefficient(z) == Complex{0.0, 2.0});  // [X, Y] = 2iZ

  CHECK(commutator(x, x).empty());

  // [XX, ZI] against the dense oracle.
  const auto p = PauliString::parse("XX");
  const auto q = PauliString::parse("ZI");
  auto c2 = commutator(p, q);
  REQUIRE(c2.size() == 1);
  CHECK(c2.coefficient(PauliString::parse("YX")) == Complex{0.0, -2.0});
  const Eigen::MatrixXcd dense =
      oracle_dense(p) * oracle_dense(q) - oracle_dense(q) * oracle_dense(p);
  CHECK((oracle_dense(c2) - dense).norm() == 0.0);
}

TEST_CASE("anticommutator basics") {
  const auto x = PauliString::parse("X");
  const auto y = PauliString::parse("Y");

  CHECK(anticommutator(x, y).empty());

  auto a = anticommutator(x, x);
  REQUIRE(a.size() == 1);
  CHECK(a.coefficient(PauliString::parse("I")) == Complex{2.0, 0.0});

  // Single anticommuting site pair: {XY, XZ} = 0.
  const auto p = PauliString::parse("XY");
  const auto q = PauliString::parse("XZ");
  auto a2 = anticommutator(p, q);
  CHECK(a2.empty());
  const Eigen::MatrixXcd dense =
      oracle_dense(p) * oracle_dense(q) + oracle_dense(q) * oracle_dense(p);
  CHECK(dense.norm() == 0.0);
}

TEST_CASE("commutator plus anticommutator equals twice the product") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto p = random_string(rng, n);
    const auto q = random_string(rng, n);
    const auto prod = pauli_mul(p, q);

    const auto comm = commutator(p, q);
    const auto anti = anticommutator(p, q);
    const Complex total = comm.coefficient(prod.string) + anti.coefficient(prod.string);
    CHECK(total == 2.0 * prod.phase());
    CHECK(comm.size() + anti.size() == 1);
  }
}

TEST_CASE("symbolic algebra matches dense matrices on random 4-site pairs") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_string(rng, 4);
    const auto q = random_string(rng, 4);
    const Eigen::MatrixXcd dp = oracle_dense(p);
    const Eigen::MatrixXcd dq = oracle_dense(q);
    CHECK((oracle_dense(commutator(p, q)) - (dp * dq - dq * dp)).norm() <= 1e-13);
    CHECK((oracle_dense(anticommutator(p, q)) - (dp * dq + dq * dp)).norm() <= 1e-13);
  }
}

TEST_CASE("WeightedPauliSum accumulates and prunes") {
  WeightedPauliSum sum(2);
  const auto p = PauliString::parse("XZ");
  sum.add(p, {1.0, 0.0});
  sum.add(p, {0.5, 0.5});
  CHECK(sum.coefficient(p) == Complex{1.5, 0.5});
  sum.add(p, {-1.5, -0.5});
  CHECK(sum.empty());
  sum.add(p, {1e-15, 0.0});  // below the pruning tolerance
  CHECK(sum.empty());
  CHECK_THROWS_AS(sum.add(PauliString::parse("X"), 1.0), std::invalid_argument);
}

TEST_CASE("enumerate_basis counts") {
  CHECK(enumerate_basis({2, 1, true}).size() == 6);
  CHECK(enumerate_basis({5, 1, true}).size() == 15);
  CHECK(enumerate_basis({5, 2, true}).size() == 51);
  CHECK_THROWS_AS(enumerate_basis({2, 3, true}), std::invalid_argument);
}

TEST_CASE("enumerate_basis is deterministic, injective, and matches the closed form") {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      for (bool lower : {true, false}) {
        const auto basis = enumerate_basis({n, k, lower});
        CHECK(basis.size() == basis_count({n, k, lower}));
        const std::set<PauliString> unique(basis.begin(), basis.end());
        CHECK(unique.size() == basis.size());
        const auto again = enumerate_basis({n, k, lower});
        CHECK(again == basis);
        for (const auto& p : basis) {
          CHECK(p.support_span() >= (lower ? 1u : k));
          CHECK(p.support_span() <= k);
        }
      }
    }
  }
}

TEST_CASE("enumerate_basis window order is left to right") {
  const auto basis = enumerate_basis({3, 2, true});
  // 1-local block first: X/Y/Z on site 0, then site 1, then site 2.
  CHECK(basis[0].str() == "XII");
  CHECK(basis[1].str() == "YII");
  CHECK(basis[2].str() == "ZII");
  CHECK(basis[3].str() == "IXI");
  CHECK(basis[8].str() == "IIZ");
  // 2-local block: bond (0,1) before bond (1,2), lexicographic inside.
  CHECK(basis[9].str() == "XXI");
  CHECK(basis[10].str() == "XYI");
  CHECK(basis[17].str() == "ZZI");
  CHECK(basis[18].str() == "IXX");
}

TEST_CASE("to_dense basics") {
  const Eigen::MatrixXcd x = to_dense(PauliString::parse("X"));
  CHECK(x(0, 1) == Complex{1.0, 0.0});
  CHECK(x(1, 0) == Complex{1.0, 0.0});
  CHECK(x(0, 0) == Complex{0.0, 0.0});

  // Site 0 is the most significant qubit: IZ = diag(1, -1, 1, -1).
  const Eigen::MatrixXcd iz = to_dense(PauliString::parse("IZ"));
  CHECK(iz(0, 0) == Complex{1.0, 0.0});
  CHECK(iz(1, 1) == Complex{-1.0, 0.0});
  CHECK(iz(2, 2) == Complex{1.0, 0.0});
  CHECK(iz(3, 3) == Complex{-1.0, 0.0});

  CHECK_THROWS_AS(to_dense(PauliString(11)), std::invalid_argument);
}

TEST_CASE("to_dense is Hermitian and consistent with pauli_mul") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p = random_string(rng, n);
    const auto q = random_string(rng, n);
    const Eigen::MatrixXcd dp = to_dense(p);
    CHECK((dp - dp.adjoint()).norm() == 0.0);
    CHECK((dp - oracle_dense(p)).norm() == 0.0);
    const auto prod = pauli_mul(p, q);
    CHECK((dp * to_dense(q) - prod.phase() * to_dense(prod.string)).norm() <= 1e-13);
  }
}

TEST_CASE("support and span helpers") {
  const auto p = PauliString::parse("IXIZI");
  CHECK(p.support() == std::vector<std::size_t>{1, 3});
  CHECK(p.weight() == 2);
  CHECK(p.support_span() == 3);
  CHECK(PauliString(4).support_span() == 0);
  CHECK(PauliString(4).is_identity());
}
