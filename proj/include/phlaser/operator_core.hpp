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

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace phlaser {

using Complex = std::complex<double>;
using DenseMat = Eigen::MatrixXcd;
using DenseVec = Eigen::VectorXcd;
/// Compressed-row storage; all products and solves start from this form.
using SparseMat = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Square complex matrix on a (possibly joint) Hilbert space. Immutable after
/// construction; cheap to share between threads.
class Operator {
 public:
  Operator() = default;
  explicit Operator(SparseMat m);

  static Operator identity(int dim);
  static Operator zero(int dim);
  static Operator from_dense(const DenseMat& m, double drop_below = 0.0);
  static Operator from_triplets(int dim, std::span<const Triplet> entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const SparseMat& sparse() const { return m_; }
  DenseMat dense() const { return DenseMat(m_); }
  Complex coeff(int row, int col) const { return m_.coeff(row, col); }

  Operator adjoint() const;
  Operator transpose() const;
  Operator conjugate() const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  SparseMat m_;
};

/// Max-norm of the elementwise difference.
double max_abs_diff(const Operator& a, const Operator& b);

/// Largest singular value (dense SVD; meant for small operators and tests).
double spectral_norm(const Operator& op);

/// Commutator [a, b].
Operator commutator(const Operator& a, const Operator& b);

/// Dense Kronecker product a ⊗ b in sparse form.
Operator kron(const Operator& a, const Operator& b);

enum class Slot : int { motion = 0, heating = 1, cooling = 2 };

/// Ordered subsystem dimensions (motion, heating ion, cooling ion). The joint
/// index of |n, h, c> is (n * heating_levels + h) * cooling_levels + c.
struct SpaceLayout {
  int fock_cutoff = 2;
  int heating_levels = 2;
  int cooling_levels = 2;

  SpaceLayout() = default;
  SpaceLayout(int fock, int heating, int cooling = 2);

  int joint_dim() const { return fock_cutoff * heating_levels * cooling_levels; }
  int slot_dim(Slot s) const;
  int index(int n, int h, int c) const {
    return (n * heating_levels + h) * cooling_levels + c;
  }
  std::array<int, 3> unpack(int joint) const;

  friend bool operator==(const SpaceLayout&, const SpaceLayout&) = default;
};

/// Truncated annihilation operator on N Fock states.
Operator destroy(int n);
Operator number_op(int n);

enum class SpinKind { plus, minus, z, proj_upper };

/// Spin operator on the (lower, upper) pair of a `levels`-level system:
/// σ₋ = |lower><upper|, σ₊ = σ₋†, σ_z = |upper><upper| − |lower><lower|,
/// proj_upper = |upper><upper|.
Operator spin_op(SpinKind kind, int levels, int lower, int upper);

/// Transition |to><from| on a `levels`-level system.
Operator transition(int levels, int to, int from);

/// Tensor embedding of a single-subsystem operator into the joint space.
Operator embed(const Operator& op, Slot slot, const SpaceLayout& layout);

/// <m|D(β)|n> from the closed-form Laguerre expression. Exact for any m, n
/// (no truncation enters single elements).
Complex displacement_element(int m, int n, Complex beta);

/// D(β) = exp(β a† − β* a) on N Fock states, elementwise exact.
Operator displacement(Complex beta, int n);
DenseMat displacement_dense(Complex beta, int rows, int cols);

}  // namespace phlaser
