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

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hamlearn {

/// Single-site Pauli symbol. The underlying values give the ordering
/// I < X < Y < Z used for lexicographic string comparison and basis
/// enumeration.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// Value of i^e for an exponent e (taken mod 4). Phases of Pauli products
/// are tracked as integer exponents so long products never accumulate
/// floating point drift.
std::complex<double> phase_value(int exponent);

/**
 * A tensor product of single-site Pauli symbols over a fixed number of
 * sites. Site 0 is the leftmost symbol and the most significant qubit in
 * the dense Kronecker representation.
 *
 * Immutable after construction; all operations on PauliStrings are pure.
 */
class PauliString {
 public:
  /// Identity string on n_sites sites.
  explicit PauliString(std::size_t n_sites);
  explicit PauliString(std::vector<Pauli> symbols);

  /// Parses the fixed-width text form, e.g. "XIZYI" for five sites.
  /// Round-trips exactly with str().
  static PauliString parse(std::string_view text);

  /// String acting with `op` on one site and identity elsewhere.
  static PauliString single_site(std::size_t n_sites, std::size_t site, Pauli op);

  std::size_t n_sites() const { return symbols_.size(); }
  Pauli at(std::size_t site) const { return symbols_[site]; }
  std::span<const Pauli> symbols() const { return symbols_; }

  bool is_identity() const;
  /// Sites carrying a non-identity symbol.
  std::vector<std::size_t> support() const;
  /// Number of non-identity sites.
  std::size_t weight() const;
  /// Width of the smallest contiguous window containing the support
  /// (0 for the identity).
  std::size_t support_span() const;

  /// True iff the strings commute; Pauli strings always either commute or
  /// anticommute.
  bool commutes_with(const PauliString& other) const;

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b);

 private:
  std::vector<Pauli> symbols_;
};

/// Product of two Pauli strings, p*q == phase() * string.
struct PhasedPauli {
  int phase_exponent = 0;  // power of i, mod 4
  PauliString string;

  std::complex<double> phase() const { return phase_value(phase_exponent); }
};

/// Exact product p*q. Phase is one of {1, i, -1, -i}.
PhasedPauli pauli_mul(const PauliString& p, const PauliString& q);

/**
 * A finite complex combination of Pauli strings on a common number of
 * sites. Coefficients with magnitude at or below the pruning tolerance
 * (1e-14) are removed on insertion, so an empty sum is exactly zero.
 */
class WeightedPauliSum {
 public:
  static constexpr double kPruneTolerance = 1e-14;

  explicit WeightedPauliSum(std::size_t n_sites) : n_sites_(n_sites) {}

  std::size_t n_sites() const { return n_sites_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Accumulates coeff onto the term for `p`, pruning near-zero results.
  void add(const PauliString& p, std::complex<double> coeff);

  /// Coefficient of `p`, zero if absent.
  std::complex<double> coefficient(const PauliString& p) const;

  const std::map<PauliString, std::complex<double>>& terms() const { return terms_; }

 private:
  std::size_t n_sites_;
  std::map<PauliString, std::complex<double>> terms_;
};

/// [p, q] = pq - qp. Empty when the strings commute, otherwise the single
/// term 2 * phase * (pq).
WeightedPauliSum commutator(const PauliString& p, const PauliString& q);

/// {p, q} = pq + qp. Empty when the strings anticommute.
WeightedPauliSum anticommutator(const PauliString& p, const PauliString& q);

/**
 * Enumeration request for a local operator basis on a chain.
 *
 * Strings are generated per locality class m (1..k for include_lower,
 * exactly k otherwise), window by window from the left end of the chain to
 * the right, lexicographically within a window. A string belongs to the
 * class of its support span: the first and last sites of the window carry
 * non-identity symbols, interior sites are free. This makes the union over
 * localities duplicate-free.
 */
struct LocalBasisSpec {
  std::size_t n_sites = 0;
  std::size_t locality = 1;
  bool include_lower = true;
};

std::vector<PauliString> enumerate_basis(const LocalBasisSpec& spec);

/// Closed-form count of enumerate_basis output.
std::size_t basis_count(const LocalBasisSpec& spec);

/// 2x2 matrix of a single Pauli symbol.
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// Dense 2^N x 2^N Kronecker representation, site 0 most significant.
/// Throws when n_sites exceeds site_cap.
Eigen::MatrixXcd to_dense(const PauliString& p, std::size_t site_cap = 10);

}  // namespace hamlearn
