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
#include <functional>
#include <string>
#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

/// How the per-region dissipator coefficient matrices are parameterised.
///
/// UnconstrainedComplex: one (Re, Im) coordinate pair per ordered basis
/// pair (n, m), 2 b^2 reals per region. Hermitian and Psd share the
/// Hermitian layout (b diagonal reals, then (Re, Im) per pair n < m, b^2
/// reals per region); Psd additionally marks the intent that solutions be
/// positive semi-definite.
enum class GammaConstraint { UnconstrainedComplex, Hermitian, Psd };

std::string gamma_constraint_name(GammaConstraint c);
GammaConstraint gamma_constraint_from_name(const std::string& name);

/// One dissipator region of the model: a single site with an ordered jump
/// basis (default {X, Y, Z} on that site).
struct LindbladRegion {
  std::size_t site = 0;
  std::vector<PauliString> jump_basis;
};

/**
 * Ordered layout of the unknown vector x = (c, gamma coordinates).
 *
 * Hamiltonian coordinates come first, one per basis term from the
 * contiguous k-local enumeration (lower localities included). They are
 * followed by one block per region; see GammaConstraint for the intra-block
 * layout. For UnconstrainedComplex the pair (n, m) maps to columns
 * (offset + 2 (n b + m), offset + 2 (n b + m) + 1) as (Re, Im).
 */
class ModelSpace {
 public:
  /// Standard model: k-local Hamiltonian terms plus, when with_dissipator,
  /// a {X, Y, Z} jump basis on every site.
  static ModelSpace build(std::size_t n_sites, std::size_t hamiltonian_locality = 2,
                          GammaConstraint constraint = GammaConstraint::UnconstrainedComplex,
                          bool with_dissipator = true);

  std::size_t n_sites() const { return n_sites_; }
  const std::vector<PauliString>& hamiltonian_terms() const { return hamiltonian_terms_; }
  const std::vector<LindbladRegion>& regions() const { return regions_; }
  GammaConstraint gamma_constraint() const { return constraint_; }

  std::size_t hamiltonian_dimension() const { return hamiltonian_terms_.size(); }
  std::size_t region_dimension(std::size_t region) const;
  std::size_t region_offset(std::size_t region) const { return region_offsets_[region]; }
  std::size_t gamma_dimension() const;
  std::size_t dimension() const;

  std::vector<std::string> column_labels() const;

  /// Calls fn(column, n, m, weight) for every coordinate of `region`, such
  /// that gamma_{nm} = sum over matching calls of weight * x[column].
  void for_each_gamma_coordinate(
      std::size_t region,
      const std::function<void(std::size_t, std::size_t, std::size_t,
                               std::complex<double>)>& fn) const;

  /// Reassembles the (raw, not Hermitized) complex gamma block of `region`
  /// from the coordinates in x.
  Eigen::MatrixXcd unpack_gamma(const Eigen::VectorXd& x, std::size_t region) const;

  /// Writes the coordinates of `gamma` into x. Under the Hermitian layout
  /// the matrix must be Hermitian to 1e-12.
  void pack_gamma(const Eigen::MatrixXcd& gamma, std::size_t region,
                  Eigen::VectorXd& x) const;

 private:
  std::size_t n_sites_ = 0;
  std::vector<PauliString> hamiltonian_terms_;
  std::vector<LindbladRegion> regions_;
  GammaConstraint constraint_ = GammaConstraint::UnconstrainedComplex;
  std::vector<std::size_t> region_offsets_;

  void rebuild_offsets();
};

}  // namespace hamlearn
