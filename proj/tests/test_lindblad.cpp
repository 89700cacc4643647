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
#include "phlaser/lindblad.hpp"

using namespace phlaser;

namespace {

DenseMat random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DenseMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(nd(rng), nd(rng));
  return m;
}

DenseMat random_density(int n, std::mt19937_64& rng) {
  const DenseMat a = random_matrix(n, rng);
  DenseMat rho = a * a.adjoint();
  return rho / rho.trace();
}

double poisson(double mean, int n) { return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0)); }

double tv_to_poisson(const PhononDistribution& pd) {
  double s = 0.0;
  for (size_t n = 0; n < pd.p.size(); ++n) s += std::abs(pd.p[n] - poisson(pd.mean, static_cast<int>(n)));
  return 0.5 * s;
}

DensityMatrix joint_ground(const SpaceLayout& layout) {
  DenseVec g = DenseVec::Zero(layout.joint_dim());
  g[0] = 1.0;
  return DensityMatrix::pure(g);
}

}  // namespace

TEST_CASE("liouvillian: zero generator") {
  const Operator h = Operator::zero(3);
  const Superoperator l = liouvillian(h, {});
  CHECK(l.size() == 9);
  CHECK(l.matrix().nonZeros() == 0);
}

TEST_CASE("liouvillian: random 6-dim system against the direct formula") {
  std::mt19937_64 rng(42);
  const DenseMat a = random_matrix(6, rng);
  const Operator h = Operator::from_dense(0.5 * (a + a.adjoint()));
  const std::vector<Operator> jumps{Operator::from_dense(random_matrix(6, rng)),
                                    Operator::from_dense(0.3 * random_matrix(6, rng))};
  const Superoperator l = liouvillian(h, jumps);
  const LiouvilleBasis& b = l.basis();
  for (int trial = 0; trial < 3; ++trial) {
    const DenseMat rho = random_matrix(6, rng);
    const DenseMat via_super = b.unvectorize(l.apply(b.vectorize(rho)));
    const DenseMat direct = lindblad_rhs(h, jumps, rho);
    CHECK((via_super - direct).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
  }
  // Column stacking: vec index of (i, j) is i + 6j.
  CHECK(b.index(2, 3) == 2 + 6 * 3);
}

TEST_CASE("liouvillian preserves trace and Hermiticity") {
  std::mt19937_64 rng(7);
  const SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::four_level, 4);
  const Superoperator l = liouvillian(build_hamiltonian(s), build_jump_ops(s));
  const LiouvilleBasis& b = l.basis();
  const DenseVec tr = b.trace_functional();
  for (int trial = 0; trial < 3; ++trial) {
    const DenseMat rho = random_density(s.layout.joint_dim(), rng);
    const DenseVec out = l.apply(b.vectorize(rho));
    const double scale = out.cwiseAbs().maxCoeff();
    CHECK(std::abs(tr.dot(out)) < 1e-10 * std::max(1.0, scale));
    const DenseMat m = b.unvectorize(out);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("liouvillian: charge sectors are blocks of the full generator") {
  SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::four_level, 4);
  const Operator h = build_hamiltonian(s);
  const auto jumps = build_jump_ops(s);
  const Superoperator full = liouvillian(h, jumps);
  const auto q = excitation_charges(s.layout);
  for (int k : {0, 2, -4}) {
    const LiouvilleBasis sb = LiouvilleBasis::sector(q, k);
    const Superoperator sec = liouvillian(h, jumps, sb);
    double worst = 0.0;
    for (int c = 0; c < sb.size(); ++c) {
      const auto [ci, cj] = sb.element(c);
      for (int r = 0; r < sb.size(); ++r) {
        const auto [ri, rj] = sb.element(r);
        const Complex ref = full.matrix().coeff(full.basis().index(ri, rj), full.basis().index(ci, cj));
        worst = std::max(worst, std::abs(sec.matrix().coeff(r, c) - ref));
      }
    }
    CHECK(worst == 0.0);
  }
  s.tickle = {1.0, 0.0, true};
  CHECK_THROWS_AS(liouvillian(build_hamiltonian(s), jumps, LiouvilleBasis::sector(q, 0)), InvalidArgument);
}

TEST_CASE("evolve: zero generator keeps the state") {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = DensityMatrix::from_dense(random_density(3, rng));
  const Superoperator l = liouvillian(Operator::zero(3), {});
  const std::vector<double> t{0.0, 1.0, 5.0};
  for (const auto& r : evolve(rho, l, t)) CHECK((r.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("evolve: qubit amplitude damping closed form") {
  const double gamma = 3.7;
  const std::vector<Operator> jumps{std::sqrt(gamma) * spin_op(SpinKind::minus, 2, 0, 1)};
  const Superoperator l = liouvillian(Operator::zero(2), jumps);
  DenseMat up = DenseMat::Zero(2, 2);
  up(1, 1) = 1.0;
  const DensityMatrix rho0 = DensityMatrix::from_dense(up);
  std::vector<double> t;
  for (int k = 0; k <= 20; ++k) t.push_back(0.05 * k);
  for (auto method : {Integrator::dopri5, Integrator::sdirk4}) {
    EvolveOptions opt;
    opt.method = method;
    const auto traj = evolve(rho0, l, t, opt);
    REQUIRE(traj.size() == t.size());
    double worst = 0.0;
    for (size_t k = 0; k < t.size(); ++k) {
      worst = std::max(worst, std::abs(traj[k].matrix()(1, 1).real() - std::exp(-gamma * t[k])));
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("evolve: tickle drive from the ground state makes a coherent state") {
  SystemSpec s;
  s.layout = SpaceLayout(30, 2, 2);
  s.tickle = {2.0, 0.4, true};
  const Superoperator l = liouvillian(build_hamiltonian(s), {});
  const std::vector<double> t{0.25, 0.6};
  const auto traj = evolve(joint_ground(s.layout), l, t);
  for (size_t k = 0; k < t.size(); ++k) {
    // H = g(a e^{iΦ} + a† e^{−iΦ}) displaces to α = −i g t e^{−iΦ}.
    const Complex alpha = Complex(0.0, -s.tickle.g_t * t[k]) * std::exp(Complex(0.0, -s.tickle.phase));
    const auto pd = phonon_distribution(traj[k], s.layout);
    CHECK(pd.mean == doctest::Approx(std::norm(alpha)).epsilon(1e-6));
    for (int n = 0; n < 10; ++n) CHECK(std::abs(pd.p[n] - poisson(std::norm(alpha), n)) < 1e-7);
    const Complex a = expectation(traj[k], motional_annihilation(s.layout));
    CHECK(std::abs(a - alpha) < 1e-6);
  }
}

TEST_CASE("steady_state: pure damping gives the joint ground state") {
  SystemSpec s;
  s.layout = SpaceLayout(6, 2, 2);
  s.g_c = 5.0;
  s.gamma_c = 100.0;
  s.gamma_h = 10.0;
  DenseVec psi = DenseVec::Zero(s.layout.joint_dim());
  psi[s.layout.index(0, 0, 0)] = 1.0;
  SteadyStateReport rep;
  const DensityMatrix rho = steady_state(liouvillian(build_hamiltonian(s), build_jump_ops(s)), {}, &rep);
  CHECK(rep.residual < 1e-8);
  CHECK(trace_distance(rho.matrix(), DensityMatrix::pure(psi).matrix()) < 1e-10);
}

TEST_CASE("steady_state: degenerate null space is reported") {
  SystemSpec s;
  s.layout = SpaceLayout(4, 2, 2);
  s.g_c = 5.0;
  s.gamma_c = 100.0;  // heating ion neither driven nor damped
  CHECK_THROWS_AS(steady_state(liouvillian(build_hamiltonian(s), build_jump_ops(s))), SolverError);
  CHECK_THROWS_AS(steady_state(s), SolverError);
}

TEST_CASE("steady_state: sector and full-space solutions agree") {
  const SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::two_level, 12);
  const DensityMatrix sec = steady_state(s);
  const DensityMatrix full = steady_state(liouvillian(build_hamiltonian(s), build_jump_ops(s)));
  CHECK(trace_distance(sec.matrix(), full.matrix()) < 1e-9);
}

TEST_CASE("steady_state: table rows") {
  SUBCASE("4-level beryllium, N = 60 [paper: n̄ ≈ 4.4]") {
    const SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::four_level, 60);
    SteadyStateReport rep;
    const DensityMatrix rho = steady_state(s, {}, &rep);
    const auto pd = phonon_distribution(rho, s.layout);
    CHECK(rep.residual < 1e-8);
    CHECK(pd.mean == doctest::Approx(4.4).epsilon(0.4 / 4.4));
    CHECK_FALSE(pd.truncation_warning);
  }
  SUBCASE("2-level beryllium without dephasing, N = 60 [paper: n̄ = 5.3]") {
    const SystemSpec s = spec_from_table(table_row("fig5"), BerylliumModel::two_level, 60);
    const auto pd = phonon_distribution(steady_state(s), s.layout);
    CHECK(pd.mean == doctest::Approx(5.3).epsilon(0.5 / 5.3));
  }
  SUBCASE("Poissonian lasing statistics for rows 3b and 3c") {
    for (const char* row : {"fig3b", "fig3c"}) {
      const SystemSpec s = spec_from_table(table_row(row), BerylliumModel::four_level, 40);
      CHECK(tv_to_poisson(phonon_distribution(steady_state(s), s.layout)) < 0.1);
    }
  }
}

TEST_CASE("steady_state: truncation convergence for the lasing rows") {
  for (const char* row : {"fig3b", "fig3c", "fig4"}) {
    for (auto model : {BerylliumModel::two_level, BerylliumModel::four_level}) {
      const SystemSpec a = spec_from_table(table_row(row), model, 40);
      const SystemSpec b = spec_from_table(table_row(row), model, 50);
      const double na = phonon_distribution(steady_state(a), a.layout).mean;
      const double nb = phonon_distribution(steady_state(b), b.layout).mean;
      CHECK(std::abs(na - nb) / nb < 0.01);
    }
  }
}

TEST_CASE("evolve: long-time limit reaches the steady state") {
  const SystemSpec s = spec_from_table(table_row("fig3c"), BerylliumModel::two_level, 40);
  const LiouvilleBasis basis = LiouvilleBasis::sector(excitation_charges(s.layout), 0);
  const Superoperator l = liouvillian(build_hamiltonian(s), build_jump_ops(s), basis);
  const DensityMatrix ss = steady_state(l);
  const std::vector<double> t{1.0, 10.0};
  for (auto method : {Integrator::dopri5, Integrator::sdirk4}) {
    EvolveOptions opt;
    opt.method = method;
    const auto traj = evolve(joint_ground(s.layout), l, t, opt);
    CHECK(std::abs(traj.back().trace() - Complex(1.0)) < 1e-8 * 10.0);
    CHECK(trace_distance(traj.back().matrix(), ss.matrix()) < 1e-4);
  }
}

TEST_CASE("evolve: sector basis rejects states with outside support") {
  const SystemSpec s = spec_from_table(table_row("fig3c"), BerylliumModel::two_level, 6);
  const LiouvilleBasis basis = LiouvilleBasis::sector(excitation_charges(s.layout), 0);
  const Superoperator l = liouvillian(build_hamiltonian(s), build_jump_ops(s), basis);
  DenseVec psi = DenseVec::Zero(s.layout.joint_dim());
  psi[s.layout.index(0, 0, 0)] = 1.0;
  psi[s.layout.index(1, 0, 0)] = 1.0;
  const std::vector<double> t{0.1};
  CHECK_THROWS_AS(evolve(DensityMatrix::pure(psi), l, t), InvalidArgument);
}

TEST_CASE("expectation and phonon_distribution") {
  const SpaceLayout layout(40, 2, 2);
  const DensityMatrix g = joint_ground(layout);
  CHECK(std::abs(expectation(g, Operator::identity(layout.joint_dim())) - Complex(1.0)) < 1e-14);
  const auto pg = phonon_distribution(g, layout);
  CHECK(pg.p[0] == 1.0);
  CHECK(pg.mean == 0.0);

  DenseVec fock3 = DenseVec::Zero(layout.joint_dim());
  fock3[layout.index(3, 1, 0)] = 1.0;
  CHECK(expectation(DensityMatrix::pure(fock3), motional_number(layout)).real() == doctest::Approx(3.0));

  // Coherent α = 2 times |0_h 0_c>.
  const DenseVec coh = coherent_state(2.0, 40);
  DenseVec joint = DenseVec::Zero(layout.joint_dim());
  for (int n = 0; n < 40; ++n) joint[layout.index(n, 0, 0)] = coh[n];
  const auto pd = phonon_distribution(DensityMatrix::pure(joint), layout);
  for (int n = 0; n < 20; ++n) CHECK(std::abs(pd.p[n] - poisson(4.0, n)) < 1e-12);
  double sum = 0.0;
  for (double v : pd.p) sum += v;
  CHECK(std::abs(sum - 1.0) < 1e-8);

  // Truncation warning when the tail holds mass.
  DenseVec top = DenseVec::Zero(layout.joint_dim());
  top[layout.index(39, 0, 0)] = 1.0;
  CHECK(phonon_distribution(DensityMatrix::pure(top), layout).truncation_warning);

  CHECK_THROWS_AS(phonon_distribution(g, SpaceLayout(10, 2, 2)), DimensionError);
}

TEST_CASE("motional_state is the partial trace") {
  const SpaceLayout layout(5, 2, 2);
  std::mt19937_64 rng(11);
  const DensityMatrix rho = DensityMatrix::from_dense(random_density(layout.joint_dim(), rng));
  const DenseMat m = motional_state(rho, layout);
  const Operator a = destroy(5);
  const Complex direct = (m * a.dense()).trace();
  CHECK(std::abs(direct - expectation(rho, motional_annihilation(layout))) < 1e-12);
}

TEST_CASE("DensityMatrix validation and repair") {
  DenseMat m = DenseMat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix::from_dense(m), InvalidArgument);
  m(0, 1) = 0.0;
  m(0, 0) = 0.9;
  CHECK_THROWS_AS(DensityMatrix::from_dense(m), InvalidArgument);

  DenseMat small_neg = DenseMat::Zero(2, 2);
  small_neg(0, 0) = 1.0 + 1e-9;
  small_neg(1, 1) = -1e-9;
  const DensityMatrix r = DensityMatrix::repaired(small_neg);
  CHECK(r.matrix()(1, 1).real() >= 0.0);
  CHECK(std::abs(r.trace() - Complex(1.0)) < 1e-14);

  DenseMat big_neg = small_neg;
  big_neg(0, 0) = 1.0 + 1e-6;
  big_neg(1, 1) = -1e-6;
  CHECK_THROWS_AS(DensityMatrix::repaired(big_neg), SolverError);
}

TEST_CASE("tickle steady state: preconditioned GMRES matches the direct solve") {
  SystemSpec s = spec_from_table(table_row("fig4"), BerylliumModel::two_level, 10);
  s.tickle = {.g_t = khz_to_rad_per_ms(0.4), .phase = 0.3, .enabled = true};
  SteadyStateReport iter_rep, direct_rep;
  const DensityMatrix a = steady_state(s, {}, &iter_rep);
  const DensityMatrix b =
      steady_state(liouvillian(build_hamiltonian(s), build_jump_ops(s)), {}, &direct_rep);
  CHECK(iter_rep.krylov_iterations > 0);
  CHECK(direct_rep.krylov_iterations == 0);
  CHECK(iter_rep.residual < 1e-8);
  CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-9);
}
