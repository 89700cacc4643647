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

#include <doctest.h>

#include <cmath>
#include <random>

#include "phlaser/error.hpp"
#include "phlaser/operator_core.hpp"

using namespace phlaser;

namespace {

// Explicit dense Kronecker product, written independently of phlaser::kron.
DenseMat dense_kron(const DenseMat& a, const DenseMat& b) {
  DenseMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const DenseMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("destroy: smallest truncation and number operator") {
  DenseMat a2 = destroy(2).dense();
  CHECK(a2(0, 1) == Complex(1.0));
  CHECK(std::abs(a2(0, 0)) == 0.0);
  CHECK(std::abs(a2(1, 0)) == 0.0);
  CHECK(std::abs(a2(1, 1)) == 0.0);

  const Operator a = destroy(4);
  DenseMat n = (a.adjoint() * a).dense();
  for (int k = 0; k < 4; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
  CHECK(max_abs(n - DenseMat(n.diagonal().asDiagonal())) == 0.0);

  CHECK_THROWS_AS(destroy(1), DimensionError);
}

TEST_CASE("destroy: truncated commutator") {
  const int n = 7;
  const DenseMat a = destroy(n).dense();
  // Direct dense product, not the library's sparse commutator.
  const DenseMat comm = a * a.adjoint() - a.adjoint() * a;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double expected = (r != c) ? 0.0 : (r == n - 1 ? 1.0 - n : 1.0);
      CHECK(std::abs(comm(r, c) - expected) < 1e-14);
    }
  }
}

TEST_CASE("spin_op: basic forms and completeness") {
  DenseMat sm = spin_op(SpinKind::minus, 2, 0, 1).dense();
  CHECK(sm(0, 1) == Complex(1.0));
  CHECK(max_abs(sm) == 1.0);
  CHECK(sm.cwiseAbs().sum() == 1.0);

  const Operator sp = spin_op(SpinKind::plus, 2, 0, 1);
  const Operator smo = spin_op(SpinKind::minus, 2, 0, 1);
  CHECK(max_abs_diff(sp * smo + smo * sp, Operator::identity(2)) == 0.0);
  CHECK(max_abs_diff(sp, smo.adjoint()) == 0.0);

  DenseMat p = spin_op(SpinKind::proj_upper, 4, 0, 1).dense();
  CHECK(p(1, 1) == Complex(1.0));
  CHECK(p.cwiseAbs().sum() == 1.0);

  DenseMat z = spin_op(SpinKind::z, 4, 0, 1).dense();
  CHECK(z(1, 1) == Complex(1.0));
  CHECK(z(0, 0) == Complex(-1.0));

  CHECK_THROWS_AS(spin_op(SpinKind::minus, 2, 1, 1), DimensionError);
  CHECK_THROWS_AS(spin_op(SpinKind::minus, 2, 0, 2), DimensionError);
}

TEST_CASE("spin_op: sigma_plus is exactly the adjoint of sigma_minus for all pairs") {
  for (int levels : {2, 4}) {
    for (int lo = 0; lo < levels; ++lo) {
      for (int hi = lo + 1; hi < levels; ++hi) {
        const Operator sp = spin_op(SpinKind::plus, levels, lo, hi);
        const Operator sm = spin_op(SpinKind::minus, levels, lo, hi);
        CHECK(max_abs_diff(sp, sm.adjoint()) == 0.0);
      }
    }
  }
}

TEST_CASE("embed: identity, slot commutation, Kronecker oracle") {
  const SpaceLayout layout(5, 4, 2);
  CHECK(max_abs_diff(embed(Operator::identity(5), Slot::motion, layout),
                     Operator::identity(layout.joint_dim())) == 0.0);

  const Operator a = embed(destroy(5), Slot::motion, layout);
  const Operator smh = embed(spin_op(SpinKind::minus, 4, 0, 1), Slot::heating, layout);
  const Operator sph = embed(spin_op(SpinKind::plus, 4, 0, 1), Slot::heating, layout);
  CHECK(max_abs_diff(commutator(a, smh), Operator::zero(layout.joint_dim())) == 0.0);

  const DenseMat oracle = dense_kron(dense_kron(destroy(5).dense(),
                                                spin_op(SpinKind::plus, 4, 0, 1).dense()),
                                     DenseMat::Identity(2, 2));
  CHECK(max_abs((a * sph).dense() - oracle) < 1e-15);

  CHECK_THROWS_AS(embed(destroy(4), Slot::motion, layout), DimensionError);
  CHECK_THROWS_AS(embed(destroy(2), Slot::heating, layout), DimensionError);
}

TEST_CASE("embed preserves the spectral norm") {
  const SpaceLayout layout(4, 2, 2);
  const Operator a = destroy(4);
  CHECK(spectral_norm(embed(a, Slot::motion, layout)) == doctest::Approx(spectral_norm(a)));
  const Operator z = spin_op(SpinKind::z, 2, 0, 1);
  CHECK(spectral_norm(embed(z, Slot::cooling, layout)) == doctest::Approx(1.0));
}

TEST_CASE("layout ordering is (motion, heating, cooling)") {
  const SpaceLayout layout(3, 4, 2);
  CHECK(layout.joint_dim() == 24);
  CHECK(layout.index(1, 2, 1) == (1 * 4 + 2) * 2 + 1);
  const auto u = layout.unpack(layout.index(2, 3, 1));
  CHECK(u[0] == 2);
  CHECK(u[1] == 3);
  CHECK(u[2] == 1);
  CHECK_THROWS_AS(SpaceLayout(1, 2, 2), DimensionError);
  CHECK_THROWS_AS(SpaceLayout(4, 3, 2), DimensionError);
  CHECK_THROWS_AS(SpaceLayout(4, 2, 3), DimensionError);
}

TEST_CASE("sparse and dense forms agree") {
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  DenseMat m(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) m(r, c) = (r + c) % 3 == 0 ? Complex(nd(rng), nd(rng)) : 0.0;
  const Operator op = Operator::from_dense(m);
  CHECK(max_abs(op.dense() - m) < 1e-12);
}

TEST_CASE("displacement: identity, vacuum overlap, products") {
  CHECK(max_abs_diff(displacement(0.0, 10), Operator::identity(10)) == 0.0);

  for (Complex beta : {Complex(0.3, 0.0), Complex(-0.5, 0.7), Complex(0.0, 1.0)}) {
    CHECK(std::abs(displacement_element(0, 0, beta) - std::exp(-std::norm(beta) / 2.0)) < 1e-15);
  }

  const int n = 60;
  for (Complex beta : {Complex(1.0, 0.0), Complex(0.6, -0.8), Complex(-0.2, 0.5)}) {
    const DenseMat d = displacement_dense(beta, n, n);
    const DenseMat dm = displacement_dense(-beta, n, n);
    const int block = n - static_cast<int>(std::ceil(4.0 * std::abs(beta) * std::sqrt(n)));
    const DenseMat prod = (d * dm).topLeftCorner(block, block);
    CHECK(max_abs(prod - DenseMat::Identity(block, block)) < 1e-8);
    // D(β)† = D(−β) on the same block.
    CHECK(max_abs((d.adjoint() - dm).topLeftCorner(block, block)) < 1e-12);
  }
}

TEST_CASE("displacement: columns of D(β)|0> are coherent amplitudes") {
  const Complex beta(0.8, -0.4);
  const double x = std::norm(beta);
  double fact = 1.0;
  for (int m = 0; m < 20; ++m) {
    if (m > 0) fact *= m;
    const Complex expected = std::exp(-x / 2.0) * std::pow(beta, m) / std::sqrt(fact);
    CHECK(std::abs(displacement_element(m, 0, beta) - expected) < 1e-13);
  }
}

TEST_CASE("displacement: agrees with a matrix exponential in a large space") {
  // exp(β a† − β* a) on N = 120 Fock states; compare the top-left 20x20 block.
  const int big = 120;
  const Complex beta(0.45, 0.3);
  const DenseMat a = destroy(big).dense();
  const DenseMat gen = beta * a.adjoint() - std::conj(beta) * a;
  DenseMat term = DenseMat::Identity(big, big);
  DenseMat sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * gen / static_cast<double>(k);
    sum += term;
  }
  const DenseMat d = displacement_dense(beta, 20, 20);
  CHECK(max_abs(sum.topLeftCorner(20, 20) - d) < 1e-12);
}
