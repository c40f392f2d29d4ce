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

#include "hamlearn/model_space.hpp"

#include <stdexcept>

namespace hamlearn {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
}

std::string gamma_constraint_name(GammaConstraint c) {
  switch (c) {
    case GammaConstraint::UnconstrainedComplex: return "unconstrained";
    case GammaConstraint::Hermitian: return "hermitian";
    case GammaConstraint::Psd: return "psd";
  }
  throw std::invalid_argument("invalid gamma constraint");
}

GammaConstraint gamma_constraint_from_name(const std::string& name) {
  if (name == "unconstrained" || name == "unconstrained-complex") {
    return GammaConstraint::UnconstrainedComplex;
  }
  if (name == "hermitian") return GammaConstraint::Hermitian;
  if (name == "psd") return GammaConstraint::Psd;
  throw std::invalid_argument("unknown gamma constraint '" + name +
                              "' (expected unconstrained, hermitian, or psd)");
}

ModelSpace ModelSpace::build(std::size_t n_sites, std::size_t hamiltonian_locality,
                             GammaConstraint constraint, bool with_dissipator) {
  ModelSpace model;
  model.n_sites_ = n_sites;
  model.constraint_ = constraint;
  model.hamiltonian_terms_ = enumerate_basis(
      {n_sites, std::min(hamiltonian_locality, n_sites), /*include_lower=*/true});
  if (with_dissipator) {
    for (std::size_t s = 0; s < n_sites; ++s) {
      LindbladRegion region;
      region.site = s;
      region.jump_basis = {PauliString::single_site(n_sites, s, Pauli::X),
                           PauliString::single_site(n_sites, s, Pauli::Y),
                           PauliString::single_site(n_sites, s, Pauli::Z)};
      model.regions_.push_back(std::move(region));
    }
  }
  model.rebuild_offsets();
  return model;
}

void ModelSpace::rebuild_offsets() {
  region_offsets_.clear();
  std::size_t offset = hamiltonian_terms_.size();
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    region_offsets_.push_back(offset);
    offset += region_dimension(r);
  }
}

std::size_t ModelSpace::region_dimension(std::size_t region) const {
  const std::size_t b = regions_.at(region).jump_basis.size();
  return constraint_ == GammaConstraint::UnconstrainedComplex ? 2 * b * b : b * b;
}

std::size_t ModelSpace::gamma_dimension() const {
  std::size_t total = 0;
  for (std::size_t r = 0; r < regions_.size(); ++r) total += region_dimension(r);
  return total;
}

std::size_t ModelSpace::dimension() const {
  return hamiltonian_dimension() + gamma_dimension();
}

std::vector<std::string> ModelSpace::column_labels() const {
  std::vector<std::string> labels;
  labels.reserve(dimension());
  for (const PauliString& term : hamiltonian_terms_) labels.push_back("H:" + term.str());
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    const LindbladRegion& region = regions_[r];
    const std::size_t b = region.jump_basis.size();
    auto symbol = [&](std::size_t i) {
      const PauliString& p = region.jump_basis[i];
      return std::string(1, pauli_char(p.at(region.site)));
    };
    const std::string prefix = "D" + std::to_string(region.site) + ":";
    if (constraint_ == GammaConstraint::UnconstrainedComplex) {
      for (std::size_t n = 0; n < b; ++n) {
        for (std::size_t m = 0; m < b; ++m) {
          labels.push_back(prefix + "re:" + symbol(n) + "," + symbol(m));
          labels.push_back(prefix + "im:" + symbol(n) + "," + symbol(m));
        }
      }
    } else {
      for (std::size_t n = 0; n < b; ++n) labels.push_back(prefix + "diag:" + symbol(n));
      for (std::size_t n = 0; n < b; ++n) {
        for (std::size_t m = n + 1; m < b; ++m) {
          labels.push_back(prefix + "re:" + symbol(n) + "," + symbol(m));
          labels.push_back(prefix + "im:" + symbol(n) + "," + symbol(m));
        }
      }
    }
  }
  return labels;
}

void ModelSpace::for_each_gamma_coordinate(
    std::size_t region,
    const std::function<void(std::size_t, std::size_t, std::size_t,
                             std::complex<double>)>& fn) const {
  const std::size_t b = regions_.at(region).jump_basis.size();
  const std::size_t offset = region_offsets_.at(region);
  if (constraint_ == GammaConstraint::UnconstrainedComplex) {
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = 0; m < b; ++m) {
        const std::size_t col = offset + 2 * (n * b + m);
        fn(col, n, m, 1.0);
        fn(col + 1, n, m, kImag);
      }
    }
    return;
  }
  // Hermitian layout: diagonal entries, then the upper triangle; the lower
  // triangle mirrors with conjugated weights.
  for (std::size_t n = 0; n < b; ++n) fn(offset + n, n, n, 1.0);
  std::size_t col = offset + b;
  for (std::size_t n = 0; n < b; ++n) {
    for (std::size_t m = n + 1; m < b; ++m) {
      fn(col, n, m, 1.0);
      fn(col, m, n, 1.0);
      fn(col + 1, n, m, kImag);
      fn(col + 1, m, n, -kImag);
      col += 2;
    }
  }
}

Eigen::MatrixXcd ModelSpace::unpack_gamma(const Eigen::VectorXd& x, std::size_t region) const {
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw std::invalid_argument("coordinate vector does not match model dimension");
  }
  const std::size_t b = regions_.at(region).jump_basis.size();
  Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Zero(b, b);
  for_each_gamma_coordinate(region, [&](std::size_t col, std::size_t n, std::size_t m,
                                        std::complex<double> w) {
    gamma(n, m) += w * x(static_cast<Eigen::Index>(col));
  });
  return gamma;
}

void ModelSpace::pack_gamma(const Eigen::MatrixXcd& gamma, std::size_t region,
                            Eigen::VectorXd& x) const {
  const std::size_t b = regions_.at(region).jump_basis.size();
  if (gamma.rows() != static_cast<Eigen::Index>(b) ||
      gamma.cols() != static_cast<Eigen::Index>(b)) {
    throw std::invalid_argument("gamma block has wrong shape for region");
  }
  if (static_cast<std::size_t>(x.size()) != dimension()) {
    throw std::invalid_argument("coordinate vector does not match model dimension");
  }
  const std::size_t offset = region_offsets_.at(region);
  if (constraint_ == GammaConstraint::UnconstrainedComplex) {
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = 0; m < b; ++m) {
        const auto col = static_cast<Eigen::Index>(offset + 2 * (n * b + m));
        x(col) = gamma(n, m).real();
        x(col + 1) = gamma(n, m).imag();
      }
    }
    return;
  }
  if ((gamma - gamma.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("Hermitian layout requires a Hermitian gamma block");
  }
  for (std::size_t n = 0; n < b; ++n) {
    x(static_cast<Eigen::Index>(offset + n)) = gamma(n, n).real();
  }
  std::size_t col = offset + b;
  for (std::size_t n = 0; n < b; ++n) {
    for (std::size_t m = n + 1; m < b; ++m) {
      x(static_cast<Eigen::Index>(col)) = gamma(n, m).real();
      x(static_cast<Eigen::Index>(col + 1)) = gamma(n, m).imag();
      col += 2;
    }
  }
}

}  // namespace hamlearn
