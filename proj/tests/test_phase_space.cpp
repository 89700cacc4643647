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
#include <numbers>
#include <random>

#include "phlaser/error.hpp"
#include "phlaser/phase_space.hpp"

using namespace phlaser;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

DensityMatrix pure_motion(const DenseVec& psi) { return DensityMatrix::pure(psi); }

DenseVec fock(int n, int dim) {
  DenseVec v = DenseVec::Zero(dim);
  v[n] = 1.0;
  return v;
}

DensityMatrix random_mixed(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DenseMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(nd(rng), nd(rng));
  DenseMat r = g * g.adjoint();
  return DensityMatrix::from_dense(r / r.trace(), 1e-9);
}

double l1_against(const MarginalCurve& m, double (*f)(double, double), double param) {
  double s = 0.0;
  for (size_t i = 1; i < m.x.size(); ++i) {
    const double a = std::abs(m.density[i] - f(m.x[i], param));
    const double b = std::abs(m.density[i - 1] - f(m.x[i - 1], param));
    s += 0.5 * (m.x[i] - m.x[i - 1]) * (a + b);
  }
  return s;
}

double gaussian(double x, double mean) { return std::exp(-(x - mean) * (x - mean)) / std::sqrt(kPi); }
double fock1_density(double x, double) { return 2.0 * x * x * std::exp(-x * x) / std::sqrt(kPi); }

}  // namespace

TEST_CASE("symmetric grids") {
  const auto g = default_beta_grid();
  REQUIRE(g.size() == 71);
  CHECK(g.front() == doctest::Approx(-0.7));
  CHECK(g.back() == doctest::Approx(0.7));
  CHECK(g[35] == 0.0);
  CHECK(symmetric_grid(0.0, 0.1).size() == 1);
  CHECK_THROWS_AS(symmetric_grid(1.0, 0.3), InvalidArgument);
  CHECK_THROWS_AS(symmetric_grid(1.0, 0.0), InvalidArgument);
}

TEST_CASE("char_fun: analytic states") {
  const auto grid = symmetric_grid(1.0, 0.05);
  SUBCASE("vacuum") {
    const auto c = char_fun(pure_motion(fock(0, 20)), 0.4, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(c.values[i] - std::exp(-0.5 * grid[i] * grid[i])) < 1e-12);
    }
  }
  SUBCASE("coherent") {
    const Complex alpha(1.2, -0.7);
    for (double phi : {0.0, kPi / 2, 2.1}) {
      const auto c = char_fun(pure_motion(coherent_state(alpha, 45)), phi, grid);
      for (size_t i = 0; i < grid.size(); ++i) {
        const Complex b = grid[i] * std::polar(1.0, phi);
        const Complex want = std::exp(-0.5 * std::norm(b) + b * std::conj(alpha) - std::conj(b) * alpha);
        CHECK(std::abs(c.values[i] - want) < 1e-10);
      }
    }
  }
  SUBCASE("Fock |1>") {
    const auto c = char_fun(pure_motion(fock(1, 10)), 1.0, grid);
    for (size_t i = 0; i < grid.size(); ++i) {
      const double b2 = grid[i] * grid[i];
      CHECK(std::abs(c.values[i] - std::exp(-0.5 * b2) * (1.0 - b2)) < 1e-12);
    }
  }
}

TEST_CASE("char_fun: invariants on random states") {
  const auto grid = default_beta_grid();
  for (unsigned seed : {1u, 2u, 3u}) {
    const DensityMatrix rho = random_mixed(12, seed);
    const auto c = char_fun(rho, 0.3 * seed, grid);
    const size_t n = grid.size();
    CHECK(std::abs(c.values[n / 2] - 1.0) < 1e-10);
    for (size_t i = 0; i < n; ++i) {
      CHECK(std::abs(c.values[i] - std::conj(c.values[n - 1 - i])) < 1e-10);
      CHECK(std::abs(c.values[i]) <= 1.0 + 1e-12);
    }
    CHECK_FALSE(c.beyond_safe_range);
  }
  CHECK(char_fun(random_mixed(6, 9), 0.0, symmetric_grid(1.2, 0.1)).beyond_safe_range);
}

TEST_CASE("char_fun of a joint state equals that of its motional reduction") {
  const SpaceLayout layout(8, 2, 2);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  DenseVec psi(layout.joint_dim());
  for (int i = 0; i < psi.size(); ++i) psi[i] = Complex(nd(rng), nd(rng));
  psi.normalize();
  const DensityMatrix joint = DensityMatrix::pure(psi);
  const auto grid = default_beta_grid();
  const auto a = char_fun(joint, layout, 0.8, grid);
  const auto b = char_fun(DensityMatrix::repaired(motional_state(joint, layout)), 0.8, grid);
  for (size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-12);
}

TEST_CASE("marginal_from_charfun: analytic densities on a wide grid") {
  const auto wide = symmetric_grid(5.0, 0.02);
  const auto x = symmetric_grid(6.0, 0.05);
  SUBCASE("vacuum has variance 1/2") {
    const auto m = marginal_from_charfun(char_fun(pure_motion(fock(0, 10)), kPi / 2, wide), 5.0, x);
    CHECK(m.quadrature_angle == doctest::Approx(0.0));
    CHECK(l1_against(m, gaussian, 0.0) < 0.02);
    double var = 0.0;
    for (size_t i = 0; i < x.size(); ++i) var += 0.05 * x[i] * x[i] * m.density[i];
    CHECK(var == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(m.integral() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(m.raw_min) * (x.back() - x.front()) < kRingingBudget);
    CHECK_FALSE(m.ringing_warning);
  }
  SUBCASE("coherent alpha = 2 sits at sqrt(2) * 2 on X_0") {
    const auto m = marginal_from_charfun(char_fun(pure_motion(coherent_state(2.0, 40)), kPi / 2, wide), 5.0, x);
    CHECK(l1_against(m, gaussian, 2.0 * std::numbers::sqrt2) < 0.02);
    double mean = 0.0;
    for (size_t i = 0; i < x.size(); ++i) mean += 0.05 * x[i] * m.density[i];
    CHECK(mean == doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-3));
    // Along the other axis the same state is centered.
    const auto p = marginal_from_charfun(char_fun(pure_motion(coherent_state(2.0, 40)), 0.0, wide), 5.0, x);
    CHECK(l1_against(p, gaussian, 0.0) < 0.02);
  }
  SUBCASE("Fock |1>") {
    const auto m = marginal_from_charfun(char_fun(pure_motion(fock(1, 10)), kPi / 2, wide), 5.0, x);
    CHECK(l1_against(m, fock1_density, 0.0) < 0.02);
  }
}

TEST_CASE("marginal_from_charfun: measured window and padding") {
  const auto g = default_beta_grid();
  const auto c = char_fun(pure_motion(fock(0, 10)), kPi / 2, g);
  const auto m = marginal_from_charfun(c);
  // Conjugate grid of the sequence padded to ±1.0: M = 101 points.
  REQUIRE(m.x.size() == 101);
  const double dl = std::numbers::sqrt2 * 0.02;
  CHECK(m.x[1] - m.x[0] == doctest::Approx(2.0 * kPi / (101.0 * dl)));
  // Independent oracle: the truncated cosine series of the vacuum transform.
  double norm = 0.0;
  std::vector<double> want(m.x.size());
  for (size_t j = 0; j < m.x.size(); ++j) {
    double s = 1.0;
    for (int k = 1; k <= 35; ++k) {
      const double lam = k * dl;
      s += 2.0 * std::exp(-0.25 * lam * lam) * std::cos(lam * m.x[j]);
    }
    want[j] = s * dl / (2.0 * kPi);
  }
  for (size_t j = 1; j < m.x.size(); ++j) norm += 0.5 * (m.x[j] - m.x[j - 1]) * (want[j] + want[j - 1]);
  for (size_t j = 0; j < m.x.size(); ++j) {
    CHECK(std::abs(m.density[j] - std::max(want[j] / norm, 0.0)) < 1e-12);
  }
  CHECK(m.raw_integral == doctest::Approx(norm).epsilon(1e-12));
  for (double v : m.density) CHECK(v >= 0.0);

  // The measured window cannot resolve the vacuum, so sinc ringing exceeds
  // the budget and is flagged.
  CHECK(m.raw_min < 0.0);
  CHECK(m.ringing_warning);
}

TEST_CASE("marginal_from_charfun: grid validation and resampling") {
  const DensityMatrix vac = pure_motion(fock(0, 6));
  auto c = char_fun(vac, 0.0, default_beta_grid());
  CHECK_THROWS_AS(marginal_from_charfun(c, 0.5), InvalidArgument);
  auto shifted = c;
  shifted.grid.back() += 0.01;
  CHECK_THROWS_AS(marginal_from_charfun(shifted), InvalidArgument);

  // Non-uniform symmetric grid: interpolated onto the finest spacing.
  std::vector<double> nu = {-0.7, -0.5, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.5, 0.7};
  const auto x = symmetric_grid(4.0, 0.1);
  const auto a = marginal_from_charfun(char_fun(vac, 0.0, nu), 1.0, x);
  const auto b = marginal_from_charfun(char_fun(vac, 0.0, symmetric_grid(0.7, 0.1)), 1.0, x);
  CHECK(l1_distance(a, b) < 0.02);
}

TEST_CASE("wigner: analytic states and sign convention") {
  const auto x = symmetric_grid(1.5, 0.5);
  SUBCASE("vacuum") {
    const auto w = wigner(pure_motion(fock(0, 10)), x, x);
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < x.size(); ++j) {
        const double a2 = 0.5 * (x[j] * x[j] + x[i] * x[i]);
        CHECK(w.values(i, j) == doctest::Approx(2.0 / kPi * std::exp(-2.0 * a2)).epsilon(1e-10));
      }
  }
  SUBCASE("Fock |1>") {
    const auto w = wigner(pure_motion(fock(1, 10)), x, x);
    CHECK(w.values(3, 3) == doctest::Approx(-2.0 / kPi));
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < x.size(); ++j) {
        const double a2 = 0.5 * (x[j] * x[j] + x[i] * x[i]);
        CHECK(std::abs(w.values(i, j) - 2.0 / kPi * (4.0 * a2 - 1.0) * std::exp(-2.0 * a2)) < 1e-12);
      }
  }
  SUBCASE("coherent peak sits at +alpha") {
    const Complex alpha(0.5, -0.5);
    const auto w = wigner(pure_motion(coherent_state(alpha, 30)), x, x);
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < x.size(); ++j) {
        const Complex a = Complex(x[j], x[i]) / std::numbers::sqrt2;
        CHECK(std::abs(w.values(i, j) - 2.0 / kPi * std::exp(-2.0 * std::norm(a - alpha))) < 1e-8);
      }
  }
  SUBCASE("rotated grid") {
    const Complex alpha(0.8, 0.3);
    const double psi = 0.7;
    const auto w = wigner(pure_motion(coherent_state(alpha, 30)), x, x, psi);
    const Complex a = std::polar(1.0, psi) * Complex(x[4], x[1]) / std::numbers::sqrt2;
    CHECK(w.values(1, 4) == doctest::Approx(2.0 / kPi * std::exp(-2.0 * std::norm(a - alpha))));
  }
}

TEST_CASE("wigner: normalization and boundary check") {
  const auto big = symmetric_grid(5.0, 0.1);
  const auto w = wigner(pure_motion(coherent_state(1.0, 30)), big, big);
  CHECK(w.integral() == doctest::Approx(1.0).epsilon(0.02));
  CHECK_FALSE(w.boundary_warning);
  const auto small = symmetric_grid(1.0, 0.1);
  CHECK(wigner(pure_motion(coherent_state(1.0, 30)), small, small).boundary_warning);
  CHECK_THROWS_AS(wigner(pure_motion(fock(0, 4)), std::vector<double>{0.0}, big), InvalidArgument);
}

TEST_CASE("charfun and Wigner pipelines give the same marginals") {
  // Thermal-coherent mixture on a short Fock space.
  DenseMat r = DenseMat::Zero(25, 25);
  for (Complex alpha : {Complex(1.5, 0.0), Complex(-0.5, 1.0)}) {
    const DenseVec c = coherent_state(alpha, 25);
    r += 0.5 * c * c.adjoint();
  }
  const DensityMatrix rho = DensityMatrix::repaired(r);
  const auto x = symmetric_grid(6.0, 0.1);
  for (double psi : {0.0, kPi / 2}) {
    const auto cf = marginal_from_charfun(char_fun(rho, psi + kPi / 2, symmetric_grid(5.0, 0.02)), 5.0, x);
    const auto wm = wigner_marginal(wigner(rho, x, x, psi));
    CHECK(cf.quadrature_angle == doctest::Approx(wm.quadrature_angle));
    CHECK(l1_distance(cf, wm) < 0.02);
  }
}

TEST_CASE("phase_variance_trace") {
  std::vector<double> t;
  for (int k = 0; k <= 20; ++k) t.push_back(0.1 * k);
  SUBCASE("constant amplitude") {
    std::vector<Complex> a(t.size(), Complex(1.0, 1.0));
    const auto f = phase_variance_trace(t, a, 2.0);
    CHECK(std::abs(f.rate) < 1e-15);
    CHECK_FALSE(f.saturated);
    CHECK(f.points_used == 21);
  }
  SUBCASE("pure dephasing gives 2 Gamma t") {
    // L = sqrt(2Γ) a†a damps coherences ρ_{n+1,n} at Γ, so <a> ∝ e^{−Γt}.
    const int n = 30;
    const double gamma = 0.8;
    const Operator l = std::sqrt(2.0 * gamma) * number_op(n);
    const Superoperator lv = liouvillian(Operator::zero(n), std::span<const Operator>(&l, 1));
    const DenseVec c = coherent_state(1.5, n);
    const DenseMat a = destroy(n).dense();
    std::vector<Complex> amp;
    evolve_vector(lv, lv.basis().vectorize(c * c.adjoint()), t, [&](int, double, const DenseVec& v) {
      amp.push_back((lv.basis().unvectorize(v) * a).trace());
      return true;
    });
    const auto f = phase_variance_trace(t, amp, std::norm(amp[0]));
    CHECK(f.rate == doctest::Approx(2.0 * gamma).epsilon(1e-6));
    for (size_t k = 0; k < t.size(); ++k) CHECK(std::abs(f.theta_sq[k] - 2.0 * gamma * t[k]) < 1e-6);
  }
  SUBCASE("saturation") {
    std::vector<Complex> a;
    for (double tt : t) a.push_back(tt < 1.0 ? std::exp(-tt) : 1e-9);
    const auto f = phase_variance_trace(t, a, 1.0);
    CHECK(f.saturated);
    CHECK(f.points_used == 10);
    CHECK(f.rate == doctest::Approx(2.0));
  }
  SUBCASE("errors") {
    std::vector<Complex> a(t.size(), 1.0);
    CHECK_THROWS_AS(phase_variance_trace(t, a, 2.0), InvalidArgument);
    CHECK_THROWS_AS(phase_variance_trace(t, a, 0.0), InvalidArgument);
    a.pop_back();
    CHECK_THROWS_AS(phase_variance_trace(t, a, 1.0), InvalidArgument);
  }
}

TEST_CASE("coherent_start") {
  const SpaceLayout layout(30, 4, 2);
  const auto rho = coherent_start(Complex(0.0, 2.0), layout);
  CHECK(phonon_distribution(rho, layout).mean == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(expectation(rho, motional_annihilation(layout)).imag() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rho.matrix()(layout.index(2, kBright, 0), layout.index(2, kBright, 0)).real() > 0.0);
  CHECK(std::abs(rho.matrix()(layout.index(2, kQubitUpper, 0), layout.index(2, kQubitUpper, 0))) == 0.0);
}

TEST_CASE("amplitude_trajectory: sector propagation matches the full space") {
  const SystemSpec s = spec_from_table(table_row("fig3c"), BerylliumModel::two_level, 12);
  const DensityMatrix rho0 = coherent_start(1.3, s.layout);
  std::vector<double> t = {0.0, 0.1, 0.3, 0.6};
  const auto sector = amplitude_trajectory(s, rho0, t);

  const Superoperator full = liouvillian(build_hamiltonian(s), build_jump_ops(s));
  const Operator a = motional_annihilation(s.layout);
  std::vector<Complex> ref;
  evolve_vector(full, full.basis().vectorize(rho0.matrix()), t, [&](int, double, const DenseVec& v) {
    ref.push_back(expectation(full.basis().unvectorize(v), a));
    return true;
  });
  REQUIRE(sector.size() == ref.size());
  for (size_t k = 0; k < t.size(); ++k) CHECK(std::abs(sector[k] - ref[k]) < 1e-8);
  CHECK(std::abs(sector[0] - 1.3) < 1e-4);  // Fock truncation of |1.3>
}

TEST_CASE("tickle locking breaks the symmetry of Im C") {
  SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::two_level_dephased, 20);
  const auto free_state = steady_state(s);
  s.tickle = {.g_t = khz_to_rad_per_ms(0.4), .phase = kPi / 2, .enabled = true};
  SteadyStateReport rep;
  const auto locked = steady_state(s, {}, &rep);
  CHECK(rep.residual < 1e-8);
  const auto grid = default_beta_grid();
  auto max_im = [&](const DensityMatrix& rho) {
    double m = 0.0;
    for (Complex c : char_fun(rho, s.layout, kPi / 2, grid).values) m = std::max(m, std::abs(c.imag()));
    return m;
  };
  const double unlocked = max_im(free_state);
  const double lock = max_im(locked);
  CHECK(lock > 0.1);
  CHECK(lock > 5.0 * unlocked);
  // The force −i g e^{−iΦ} pulls <a> towards −e^{−iΦ}·i = −1 for Φ = π/2.
  const Complex a = expectation(locked, motional_annihilation(s.layout));
  CHECK(a.real() < -1.0);
  CHECK(std::abs(a.imag()) < 0.1 * std::abs(a.real()));
}
