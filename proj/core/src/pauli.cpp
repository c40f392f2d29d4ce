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

#include "hamlearn/pauli.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace hamlearn {

namespace {

struct SiteProduct {
  Pauli result;
  int phase_exponent;  // power of i
};

// Single-site multiplication table, row * column. Off-diagonal products of
// distinct non-identity symbols pick up +i on the cyclic order (X,Y,Z) and
// -i against it.
constexpr SiteProduct kMulTable[4][4] = {
    /* I */ {{Pauli::I, 0}, {Pauli::X, 0}, {Pauli::Y, 0}, {Pauli::Z, 0}},
    /* X */ {{Pauli::X, 0}, {Pauli::I, 0}, {Pauli::Z, 1}, {Pauli::Y, 3}},
    /* Y */ {{Pauli::Y, 0}, {Pauli::Z, 3}, {Pauli::I, 0}, {Pauli::X, 1}},
    /* Z */ {{Pauli::Z, 0}, {Pauli::Y, 1}, {Pauli::X, 3}, {Pauli::I, 0}},
};

void check_same_sites(const PauliString& p, const PauliString& q) {
  if (p.n_sites() != q.n_sites()) {
    throw std::invalid_argument("PauliString size mismatch: " +
                                std::to_string(p.n_sites()) + " vs " +
                                std::to_string(q.n_sites()));
  }
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::invalid_argument("invalid Pauli symbol");
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli character '") + c + "'");
  }
}

std::complex<double> phase_value(int exponent) {
  switch (((exponent % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

PauliString::PauliString(std::size_t n_sites) : symbols_(n_sites, Pauli::I) {
  if (n_sites == 0) throw std::invalid_argument("PauliString needs at least one site");
}

PauliString::PauliString(std::vector<Pauli> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("PauliString needs at least one site");
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> symbols;
  symbols.reserve(text.size());
  for (char c : text) symbols.push_back(pauli_from_char(c));
  return PauliString(std::move(symbols));
}

PauliString PauliString::single_site(std::size_t n_sites, std::size_t site, Pauli op) {
  if (site >= n_sites) throw std::invalid_argument("site index out of range");
  PauliString out(n_sites);
  out.symbols_[site] = op;
  return out;
}

bool PauliString::is_identity() const {
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [](Pauli p) { return p == Pauli::I; });
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> sites;
  for (std::size_t s = 0; s < symbols_.size(); ++s) {
    if (symbols_[s] != Pauli::I) sites.push_back(s);
  }
  return sites;
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(
      std::count_if(symbols_.begin(), symbols_.end(),
                    [](Pauli p) { return p != Pauli::I; }));
}

std::size_t PauliString::support_span() const {
  std::size_t first = symbols_.size(), last = 0;
  bool any = false;
  for (std::size_t s = 0; s < symbols_.size(); ++s) {
    if (symbols_[s] != Pauli::I) {
      if (!any) first = s;
      last = s;
      any = true;
    }
  }
  return any ? last - first + 1 : 0;
}

bool PauliString::commutes_with(const PauliString& other) const {
  check_same_sites(*this, other);
  int anticommuting_sites = 0;
  for (std::size_t s = 0; s < symbols_.size(); ++s) {
    const Pauli a = symbols_[s];
    const Pauli b = other.symbols_[s];
    if (a != Pauli::I && b != Pauli::I && a != b) ++anticommuting_sites;
  }
  return anticommuting_sites % 2 == 0;
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(symbols_.size());
  for (Pauli p : symbols_) out.push_back(pauli_char(p));
  return out;
}

std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
  return a.symbols_ <=> b.symbols_;
}

PhasedPauli pauli_mul(const PauliString& p, const PauliString& q) {
  check_same_sites(p, q);
  std::vector<Pauli> symbols(p.n_sites());
  int exponent = 0;
  for (std::size_t s = 0; s < p.n_sites(); ++s) {
    const SiteProduct& sp =
        kMulTable[static_cast<int>(p.at(s))][static_cast<int>(q.at(s))];
    symbols[s] = sp.result;
    exponent += sp.phase_exponent;
  }
  return {exponent % 4, PauliString(std::move(symbols))};
}

void WeightedPauliSum::add(const PauliString& p, std::complex<double> coeff) {
  if (p.n_sites() != n_sites_) {
    throw std::invalid_argument("WeightedPauliSum term has wrong number of sites");
  }
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (std::abs(coeff) > kPruneTolerance) terms_.emplace(p, coeff);
    return;
  }
  it->second += coeff;
  if (std::abs(it->second) <= kPruneTolerance) terms_.erase(it);
}

std::complex<double> WeightedPauliSum::coefficient(const PauliString& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

WeightedPauliSum commutator(const PauliString& p, const PauliString& q) {
  WeightedPauliSum out(p.n_sites());
  if (p.commutes_with(q)) return out;
  // Anticommuting strings: pq - qp = 2 pq.
  const PhasedPauli prod = pauli_mul(p, q);
  out.add(prod.string, 2.0 * prod.phase());
  return out;
}

WeightedPauliSum anticommutator(const PauliString& p, const PauliString& q) {
  WeightedPauliSum out(p.n_sites());
  if (!p.commutes_with(q)) return out;
  const PhasedPauli prod = pauli_mul(p, q);
  out.add(prod.string, 2.0 * prod.phase());
  return out;
}

namespace {

// Appends every string of locality class m (support span exactly m) for the
// window starting at `start`: endpoints non-identity, interior free,
// lexicographic order with site `start` most significant.
void append_window_strings(std::size_t n_sites, std::size_t start, std::size_t m,
                           std::vector<PauliString>& out) {
  std::vector<std::size_t> radix(m, 4);  // interior sites: I, X, Y, Z
  radix.front() = 3;                     // endpoints: X, Y, Z
  radix.back() = 3;
  std::size_t count = 1;
  for (std::size_t r : radix) count *= r;

  for (std::size_t index = 0; index < count; ++index) {
    std::vector<Pauli> symbols(n_sites, Pauli::I);
    std::size_t rem = index;
    for (std::size_t s = m; s > 0; --s) {
      const std::size_t digit = rem % radix[s - 1];
      rem /= radix[s - 1];
      const bool endpoint = (s == 1 || s == m);
      symbols[start + s - 1] =
          static_cast<Pauli>(digit + (endpoint ? 1 : 0));  // skip I on endpoints
    }
    out.emplace_back(std::move(symbols));
  }
}

}  // namespace

std::vector<PauliString> enumerate_basis(const LocalBasisSpec& spec) {
  if (spec.n_sites == 0) throw std::invalid_argument("basis needs at least one site");
  if (spec.locality == 0) throw std::invalid_argument("locality must be positive");
  if (spec.locality > spec.n_sites) {
    throw std::invalid_argument("locality " + std::to_string(spec.locality) +
                                " exceeds chain size " + std::to_string(spec.n_sites));
  }
  std::vector<PauliString> out;
  out.reserve(basis_count(spec));
  const std::size_t m_first = spec.include_lower ? 1 : spec.locality;
  for (std::size_t m = m_first; m <= spec.locality; ++m) {
    for (std::size_t start = 0; start + m <= spec.n_sites; ++start) {
      append_window_strings(spec.n_sites, start, m, out);
    }
  }
  return out;
}

std::size_t basis_count(const LocalBasisSpec& spec) {
  std::size_t total = 0;
  const std::size_t m_first = spec.include_lower ? 1 : spec.locality;
  for (std::size_t m = m_first; m <= spec.locality && m <= spec.n_sites; ++m) {
    const std::size_t windows = spec.n_sites - m + 1;
    // 3 choices per endpoint, 4 per interior site.
    std::size_t per_window = (m == 1) ? 3 : 9;
    for (std::size_t s = 2; s < m; ++s) per_window *= 4;
    total += windows * per_window;
  }
  return total;
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -1i, 1i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd to_dense(const PauliString& p, std::size_t site_cap) {
  if (p.n_sites() > site_cap) {
    throw std::invalid_argument("to_dense: " + std::to_string(p.n_sites()) +
                                " sites exceeds cap " + std::to_string(site_cap));
  }
  Eigen::MatrixXcd out = pauli_matrix(p.at(0));
  for (std::size_t s = 1; s < p.n_sites(); ++s) {
    out = Eigen::kroneckerProduct(out, pauli_matrix(p.at(s))).eval();
  }
  return out;
}

}  // namespace hamlearn
