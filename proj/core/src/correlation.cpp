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

#include "hamlearn/correlation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hamlearn/random.hpp"

namespace hamlearn {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PauliExpectationCache::PauliExpectationCache(Eigen::MatrixXcd rho)
    : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0 ||
      (rho_.rows() & (rho_.rows() - 1)) != 0) {
    throw std::invalid_argument("state dimension must be a power of two");
  }
  std::size_t n = 0;
  for (Eigen::Index d = rho_.rows(); d > 1; d >>= 1) ++n;
  n_sites_ = n;
}

double PauliExpectationCache::value(const PauliString& p) {
  if (p.n_sites() != n_sites_) {
    throw std::invalid_argument("Pauli string acts on wrong number of sites");
  }
  auto it = cache_.find(p);
  if (it != cache_.end()) return it->second;

  // P e_j = phi_j e_{j ^ flip}; Tr[rho P] = sum_j rho(j, j ^ flip) phi_j.
  // Site s occupies bit (n - 1 - s); X and Y flip it, Y and Z contribute
  // bit-dependent phases tracked as powers of i.
  const Eigen::Index dim = rho_.rows();
  std::size_t flip = 0;
  std::vector<std::pair<std::size_t, int>> phase_bits;  // (bit mask, base exponent)
  for (std::size_t s = 0; s < n_sites_; ++s) {
    const std::size_t bit = std::size_t{1} << (n_sites_ - 1 - s);
    switch (p.at(s)) {
      case Pauli::I: break;
      case Pauli::X: flip |= bit; break;
      case Pauli::Y: flip |= bit; phase_bits.emplace_back(bit, 1); break;
      case Pauli::Z: phase_bits.emplace_back(bit, 0); break;
    }
  }
  Complex total = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    int exponent = 0;
    for (const auto& [bit, base] : phase_bits) {
      exponent += base + ((std::size_t(j) & bit) ? 2 : 0);
    }
    total += rho_(j, static_cast<Eigen::Index>(std::size_t(j) ^ flip)) *
             phase_value(exponent);
  }
  const double result = total.real();
  cache_.emplace(p, result);
  return result;
}

StructuralRow structural_row(PauliExpectationCache& cache, const PauliString& input,
                             const ModelSpace& model) {
  if (input.n_sites() != model.n_sites()) {
    throw std::invalid_argument("input operator acts on wrong number of sites");
  }
  StructuralRow out;
  out.entries = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model.dimension()));
  std::set<PauliString> measured;

  // Hamiltonian sector: -i <[O, S_l]>. The commutator of anticommuting
  // strings is a single term 2 phase (O S_l); commuting pairs give zero.
  const auto& terms = model.hamiltonian_terms();
  for (std::size_t l = 0; l < terms.size(); ++l) {
    if (input.commutes_with(terms[l])) continue;
    const PhasedPauli prod = pauli_mul(input, terms[l]);
    const Complex coeff = -kImag * 2.0 * prod.phase();
    out.entries(static_cast<Eigen::Index>(l)) = coeff * cache.value(prod.string);
    measured.insert(prod.string);
  }

  // Dissipator sector: d_{nm} = <P_m O P_n - {P_m P_n, O}/2>. All three
  // products share one underlying string; only the phases differ, so each
  // pair needs at most one measured observable.
  for (std::size_t r = 0; r < model.regions().size(); ++r) {
    const auto& basis = model.regions()[r].jump_basis;
    const std::size_t b = basis.size();
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(b, b);
    for (std::size_t n = 0; n < b; ++n) {
      for (std::size_t m = 0; m < b; ++m) {
        const PhasedPauli mo = pauli_mul(basis[m], input);
        const PhasedPauli mon = pauli_mul(mo.string, basis[n]);
        const int e_sandwich = mo.phase_exponent + mon.phase_exponent;
        const PhasedPauli mn = pauli_mul(basis[m], basis[n]);
        const PhasedPauli mno = pauli_mul(mn.string, input);
        const PhasedPauli onm = pauli_mul(input, mn.string);
        const Complex alpha =
            phase_value(e_sandwich) -
            0.5 * (phase_value(mn.phase_exponent + mno.phase_exponent) +
                   phase_value(mn.phase_exponent + onm.phase_exponent));
        if (alpha == 0.0) continue;
        const PauliString& s = mon.string;
        if (s.is_identity()) {
          d(n, m) = alpha;  // <I> = 1, no measurement required
        } else {
          d(n, m) = alpha * cache.value(s);
          measured.insert(s);
        }
      }
    }
    model.for_each_gamma_coordinate(
        r, [&](std::size_t col, std::size_t n, std::size_t m, Complex w) {
          out.entries(static_cast<Eigen::Index>(col)) += w * d(n, m);
        });
  }

  out.measurements.assign(measured.begin(), measured.end());
  return out;
}

SteadyRowBuilder::SteadyRowBuilder(const DensityMatrix& rho_ss, const ModelSpace& model)
    : model_(model), cache_(rho_ss.matrix()) {
  if ((Eigen::Index(1) << model.n_sites()) != rho_ss.dim()) {
    throw std::invalid_argument("state dimension does not match model sites");
  }
  if (model.dimension() == 0) throw std::invalid_argument("model space is empty");
}

void SteadyRowBuilder::add_input(const PauliString& input) {
  const StructuralRow row = structural_row(cache_, input, model_);
  const Eigen::VectorXd re = row.entries.real();
  const Eigen::VectorXd im = row.entries.imag();
  if (re.norm() >= CorrelationSystem::kRowDropTolerance) {
    rows_.push_back(re);
    row_labels_.push_back({input.str(), 0, 'r'});
  }
  if (im.norm() >= CorrelationSystem::kRowDropTolerance) {
    rows_.push_back(im);
    row_labels_.push_back({input.str(), 0, 'i'});
  }
  for (const PauliString& p : row.measurements) measured_.emplace(p, true);
  ++input_count_;
}

CorrelationSystem SteadyRowBuilder::snapshot() const {
  CorrelationSystem sys;
  sys.dynamical = false;
  sys.hamiltonian_dim = model_.hamiltonian_dimension();
  sys.col_labels = model_.column_labels();
  sys.row_labels = row_labels_;
  sys.matrix.resize(static_cast<Eigen::Index>(rows_.size()),
                    static_cast<Eigen::Index>(model_.dimension()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    sys.matrix.row(static_cast<Eigen::Index>(i)) = rows_[i];
  }
  sys.measured_operators.reserve(measured_.size());
  for (const auto& [p, _] : measured_) sys.measured_operators.push_back(p);
  return sys;
}

CorrelationSystem assemble_steady(const DensityMatrix& rho_ss,
                                  const std::vector<PauliString>& inputs,
                                  const ModelSpace& model) {
  if (inputs.empty()) throw std::invalid_argument("input operator set is empty");
  SteadyRowBuilder builder(rho_ss, model);
  for (const PauliString& input : inputs) builder.add_input(input);
  return builder.snapshot();
}

CorrelationSystem assemble_dynamical(const std::vector<DensityMatrix>& states,
                                     const std::vector<PauliString>& inputs,
                                     const LindbladGenerator& gen, double dt, int order,
                                     const ModelSpace& model) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (states.empty()) throw std::invalid_argument("state set is empty");
  if (inputs.empty()) throw std::invalid_argument("input operator set is empty");
  if (model.dimension() == 0) throw std::invalid_argument("model space is empty");

  const Propagator step(gen, dt);

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs_values;
  std::vector<RowLabel> labels;
  std::set<PauliString> measured;

  for (std::size_t j = 0; j < states.size(); ++j) {
    PauliExpectationCache cache0(states[j].matrix());
    const Eigen::MatrixXcd rho_dt = step.apply_matrix(states[j].matrix());
    PauliExpectationCache cache1(rho_dt);
    PauliExpectationCache cache2(order == 2 ? step.apply_matrix(rho_dt)
                                            : Eigen::MatrixXcd::Identity(1, 1));

    for (const PauliString& input : inputs) {
      const StructuralRow row = structural_row(cache0, input, model);
      const double e0 = input.is_identity() ? 1.0 : cache0.value(input);
      const double e1 = input.is_identity() ? 1.0 : cache1.value(input);
      double w;
      if (order == 1) {
        w = (e1 - e0) / dt;
      } else {
        const double e2 = input.is_identity() ? 1.0 : cache2.value(input);
        w = (-e2 + 4.0 * e1 - 3.0 * e0) / (2.0 * dt);
      }
      for (const PauliString& p : row.measurements) measured.insert(p);
      if (!input.is_identity()) measured.insert(input);

      const Eigen::VectorXd re = row.entries.real();
      const Eigen::VectorXd im = row.entries.imag();
      if (std::sqrt(re.squaredNorm() + w * w) >= CorrelationSystem::kRowDropTolerance) {
        rows.push_back(re);
        rhs_values.push_back(w);
        labels.push_back({input.str(), static_cast<int>(j), 'r'});
      }
      if (im.norm() >= CorrelationSystem::kRowDropTolerance) {
        rows.push_back(im);
        rhs_values.push_back(0.0);
        labels.push_back({input.str(), static_cast<int>(j), 'i'});
      }
    }
  }

  CorrelationSystem sys;
  sys.dynamical = true;
  sys.hamiltonian_dim = model.hamiltonian_dimension();
  sys.col_labels = model.column_labels();
  sys.row_labels = std::move(labels);
  sys.matrix.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(model.dimension()));
  sys.rhs.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sys.matrix.row(static_cast<Eigen::Index>(i)) = rows[i];
    sys.rhs(static_cast<Eigen::Index>(i)) = rhs_values[i];
  }
  sys.measured_operators.assign(measured.begin(), measured.end());
  return sys;
}

CorrelationSystem inject_noise(const CorrelationSystem& system, double sigma,
                               std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("noise sigma must be non-negative");
  CorrelationSystem out = system;
  GaussianStream stream(seed);
  for (Eigen::Index i = 0; i < out.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) {
      out.matrix(i, j) += sigma * stream.next();
    }
  }
  for (Eigen::Index i = 0; i < out.rhs.size(); ++i) {
    out.rhs(i) += sigma * stream.next();
  }
  return out;
}

std::size_t measurement_complexity(const CorrelationSystem& system) {
  return system.measured_operators.size();
}

void CorrelationSystem::write(std::ostream& out) const {
  out << "hamlearn-correlation-system 1\n";
  out << "rows " << matrix.rows() << "\n";
  out << "cols " << matrix.cols() << "\n";
  out << "hamiltonian_cols " << hamiltonian_dim << "\n";
  out << "rhs " << (dynamical ? 1 : 0) << "\n";
  for (std::size_t i = 0; i < col_labels.size(); ++i) {
    out << "col " << i << " " << col_labels[i] << "\n";
  }
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    out << "row " << i << " " << row_labels[i].input_op << " "
        << row_labels[i].state_id << " " << row_labels[i].part << "\n";
  }
  for (const PauliString& p : measured_operators) out << "measured " << p.str() << "\n";
  out << "data\n";
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << " ";
      out << format_double(matrix(i, j));
    }
    if (dynamical) out << " " << format_double(rhs(i));
    out << "\n";
  }
}

void CorrelationSystem::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("failed writing correlation system to '" + path + "'");
}

CorrelationSystem CorrelationSystem::read(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "hamlearn-correlation-system" || version != 1) {
    throw std::runtime_error("not a hamlearn correlation system file");
  }
  CorrelationSystem sys;
  Eigen::Index rows = 0, cols = 0;
  std::string key;
  while (in >> key) {
    if (key == "rows") {
      in >> rows;
    } else if (key == "cols") {
      in >> cols;
    } else if (key == "hamiltonian_cols") {
      in >> sys.hamiltonian_dim;
    } else if (key == "rhs") {
      int flag = 0;
      in >> flag;
      sys.dynamical = flag != 0;
    } else if (key == "col") {
      std::size_t idx;
      std::string label;
      in >> idx >> label;
      sys.col_labels.resize(std::max(sys.col_labels.size(), idx + 1));
      sys.col_labels[idx] = label;
    } else if (key == "row") {
      std::size_t idx;
      RowLabel label;
      in >> idx >> label.input_op >> label.state_id >> label.part;
      sys.row_labels.resize(std::max(sys.row_labels.size(), idx + 1));
      sys.row_labels[idx] = label;
    } else if (key == "measured") {
      std::string text;
      in >> text;
      sys.measured_operators.push_back(PauliString::parse(text));
    } else if (key == "data") {
      break;
    } else {
      throw std::runtime_error("unknown correlation-system header key '" + key + "'");
    }
  }
  sys.matrix.resize(rows, cols);
  if (sys.dynamical) sys.rhs.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> sys.matrix(i, j))) {
        throw std::runtime_error("truncated correlation system data");
      }
    }
    if (sys.dynamical && !(in >> sys.rhs(i))) {
      throw std::runtime_error("truncated correlation system rhs");
    }
  }
  return sys;
}

CorrelationSystem CorrelationSystem::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read(in);
}

}  // namespace hamlearn
