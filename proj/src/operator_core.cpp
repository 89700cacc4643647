// Copyright 2026 The phonon-laser-sim Authors
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

#include "phlaser/operator_core.hpp"

#include <cmath>
#include <string>

#include "phlaser/error.hpp"

namespace phlaser {

namespace {

void require_fock(int n) {
  if (n < 2) {
    throw DimensionError("Fock cutoff must be >= 2, got " + std::to_string(n));
  }
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch " +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

Operator::Operator(SparseMat m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("operator must be square");
  }
  m_.makeCompressed();
  for (int k = 0; k < m_.nonZeros(); ++k) {
    const Complex v = m_.valuePtr()[k];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DimensionError("operator has non-finite entries");
    }
  }
}

Operator Operator::identity(int dim) {
  SparseMat m(dim, dim);
  m.setIdentity();
  return Operator(std::move(m));
}

Operator Operator::zero(int dim) { return Operator(SparseMat(dim, dim)); }

Operator Operator::from_dense(const DenseMat& m, double drop_below) {
  if (m.rows() != m.cols()) throw DimensionError("operator must be square");
  std::vector<Triplet> t;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) > drop_below) t.emplace_back(r, c, m(r, c));
    }
  }
  return from_triplets(static_cast<int>(m.rows()), t);
}

Operator Operator::from_triplets(int dim, std::span<const Triplet> entries) {
  SparseMat m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return Operator(std::move(m));
}

Operator Operator::adjoint() const { return Operator(SparseMat(m_.adjoint())); }
Operator Operator::transpose() const { return Operator(SparseMat(m_.transpose())); }
Operator Operator::conjugate() const { return Operator(SparseMat(m_.conjugate())); }

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator+");
  return Operator(SparseMat(a.m_ + b.m_));
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator-");
  return Operator(SparseMat(a.m_ - b.m_));
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator*");
  return Operator(SparseMat(a.m_ * b.m_));
}

Operator operator*(Complex s, const Operator& a) {
  if (s == Complex(0.0)) return Operator::zero(a.dim());
  return Operator(SparseMat(s * a.m_));
}

double max_abs_diff(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "max_abs_diff");
  const SparseMat d = a.sparse() - b.sparse();
  double m = 0.0;
  for (int k = 0; k < d.nonZeros(); ++k) m = std::max(m, std::abs(d.valuePtr()[k]));
  return m;
}

double spectral_norm(const Operator& op) {
  Eigen::JacobiSVD<DenseMat> svd(op.dense());
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator kron(const Operator& a, const Operator& b) {
  const int db = b.dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(a.sparse().nonZeros() * b.sparse().nonZeros()));
  for (int ra = 0; ra < a.dim(); ++ra) {
    for (SparseMat::InnerIterator ia(a.sparse(), ra); ia; ++ia) {
      for (int rb = 0; rb < db; ++rb) {
        for (SparseMat::InnerIterator ib(b.sparse(), rb); ib; ++ib) {
          t.emplace_back(ra * db + rb, static_cast<int>(ia.col()) * db + static_cast<int>(ib.col()),
                         ia.value() * ib.value());
        }
      }
    }
  }
  return Operator::from_triplets(a.dim() * db, t);
}

SpaceLayout::SpaceLayout(int fock, int heating, int cooling)
    : fock_cutoff(fock), heating_levels(heating), cooling_levels(cooling) {
  require_fock(fock);
  if (heating != 2 && heating != 4) {
    throw DimensionError("heating ion must have 2 or 4 levels, got " + std::to_string(heating));
  }
  if (cooling != 2) {
    throw DimensionError("cooling ion must have 2 levels, got " + std::to_string(cooling));
  }
}

int SpaceLayout::slot_dim(Slot s) const {
  switch (s) {
    case Slot::motion: return fock_cutoff;
    case Slot::heating: return heating_levels;
    case Slot::cooling: return cooling_levels;
  }
  return 0;
}

std::array<int, 3> SpaceLayout::unpack(int joint) const {
  const int c = joint % cooling_levels;
  const int rest = joint / cooling_levels;
  return {rest / heating_levels, rest % heating_levels, c};
}

Operator destroy(int n) {
  require_fock(n);
  std::vector<Triplet> t;
  for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  return Operator::from_triplets(n, t);
}

Operator number_op(int n) {
  require_fock(n);
  std::vector<Triplet> t;
  for (int k = 1; k < n; ++k) t.emplace_back(k, k, static_cast<double>(k));
  return Operator::from_triplets(n, t);
}

Operator transition(int levels, int to, int from) {
  if (levels < 1 || to < 0 || from < 0 || to >= levels || from >= levels) {
    throw DimensionError("transition index out of range");
  }
  const Triplet t(to, from, 1.0);
  return Operator::from_triplets(levels, std::span<const Triplet>(&t, 1));
}

Operator spin_op(SpinKind kind, int levels, int lower, int upper) {
  if (!(0 <= lower && lower < upper && upper < levels)) {
    throw DimensionError("spin_op: need 0 <= lower < upper < levels");
  }
  switch (kind) {
    case SpinKind::minus: return transition(levels, lower, upper);
    case SpinKind::plus: return transition(levels, upper, lower);
    case SpinKind::z: {
      const std::array<Triplet, 2> t{Triplet(upper, upper, 1.0), Triplet(lower, lower, -1.0)};
      return Operator::from_triplets(levels, t);
    }
    case SpinKind::proj_upper: return transition(levels, upper, upper);
  }
  return Operator::zero(levels);
}

Operator embed(const Operator& op, Slot slot, const SpaceLayout& layout) {
  if (op.dim() != layout.slot_dim(slot)) {
    throw DimensionError("embed: operator dim " + std::to_string(op.dim()) +
                         " does not match slot dim " + std::to_string(layout.slot_dim(slot)));
  }
  const Operator im = Operator::identity(layout.fock_cutoff);
  const Operator ih = Operator::identity(layout.heating_levels);
  const Operator ic = Operator::identity(layout.cooling_levels);
  switch (slot) {
    case Slot::motion: return kron(kron(op, ih), ic);
    case Slot::heating: return kron(kron(im, op), ic);
    case Slot::cooling: return kron(kron(im, ih), op);
  }
  return op;
}

Complex displacement_element(int m, int n, Complex beta) {
  if (m < 0 || n < 0) throw DimensionError("displacement_element: negative index");
  const double x = std::norm(beta);
  if (x == 0.0) return m == n ? Complex(1.0) : Complex(0.0);
  // For m >= n: sqrt(n!/m!) β^(m-n) e^{-|β|²/2} L_n^(m-n)(|β|²); the m < n case
  // follows from <m|D(β)|n> = conj(<n|D(-β)|m>).
  const bool lower = m >= n;
  const int lo = lower ? n : m;
  const int hi = lower ? m : n;
  const Complex b = lower ? beta : -std::conj(beta);
  const int k = hi - lo;
  const double lag = std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
  if (lag == 0.0) return 0.0;
  const double logmag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) +
                        k * std::log(std::abs(b)) - 0.5 * x + std::log(std::abs(lag));
  const double phase = k * std::arg(b) + (lag < 0.0 ? M_PI : 0.0);
  return std::polar(std::exp(logmag), phase);
}

DenseMat displacement_dense(Complex beta, int rows, int cols) {
  DenseMat d(rows, cols);
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) d(m, n) = displacement_element(m, n, beta);
  }
  return d;
}

Operator displacement(Complex beta, int n) {
  require_fock(n);
  return Operator::from_dense(displacement_dense(beta, n, n));
}

}  // namespace phlaser
