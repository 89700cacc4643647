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

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phlaser/ion_models.hpp"
#include "phlaser/ode.hpp"
#include "phlaser/operator_core.hpp"

namespace phlaser {

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Checks the invariants (Hermitian and trace to `tol`, min eigenvalue
  /// >= −1e-8) and throws InvalidArgument otherwise.
  static DensityMatrix from_dense(const DenseMat& m, double tol = 1e-10);
  /// Hermitizes, normalizes and floors eigenvalues in [−1e-8, 0). Eigenvalues
  /// below −1e-8 are a SolverError.
  static DensityMatrix repaired(const DenseMat& m);
  static DensityMatrix pure(const DenseVec& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const DenseMat& matrix() const { return m_; }
  Complex trace() const { return m_.trace(); }

 private:
  explicit DensityMatrix(DenseMat m) : m_(std::move(m)) {}
  DenseMat m_;
};

/// Ordered set of matrix-element positions (i, j) spanning the vectorized
/// state. The full basis uses column stacking, idx = i + j·dim. A charge
/// sector keeps the pairs with q_i − q_j = k, ordered by (j, i).
class LiouvilleBasis {
 public:
  static LiouvilleBasis full(int dim);
  static LiouvilleBasis sector(std::span<const int> charges, int k);

  int hilbert_dim() const { return dim_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  bool is_full() const { return full_; }
  std::pair<int, int> element(int idx) const { return pairs_[idx]; }
  /// Position of (i, j), or −1 if the pair is outside the basis.
  int index(int i, int j) const { return lookup_[static_cast<size_t>(i) + static_cast<size_t>(j) * dim_]; }

  DenseVec vectorize(const DenseMat& m) const;
  /// Elements outside the basis are zero.
  DenseMat unvectorize(const DenseVec& v) const;
  /// Row vector r with r·vec(ρ) = Tr ρ.
  DenseVec trace_functional() const;

 private:
  int dim_ = 0;
  bool full_ = false;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> lookup_;
};

class Superoperator {
 public:
  Superoperator(SparseMat m, LiouvilleBasis basis);

  const SparseMat& matrix() const { return m_; }
  const LiouvilleBasis& basis() const { return basis_; }
  int size() const { return basis_.size(); }
  DenseVec apply(const DenseVec& v) const { return m_ * v; }

 private:
  SparseMat m_;
  LiouvilleBasis basis_;
};

/// 𝓛ρ = −i[H, ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}) on the full column-stacked
/// basis.
Superoperator liouvillian(const Operator& h, std::span<const Operator> jumps);
/// Same generator restricted to `basis`. Throws InvalidArgument if the basis
/// is not invariant under 𝓛.
Superoperator liouvillian(const Operator& h, std::span<const Operator> jumps,
                          const LiouvilleBasis& basis);

/// Direct evaluation −i[H,ρ] + Σ 𝓓[L]ρ (test oracle and small-system helper).
DenseMat lindblad_rhs(const Operator& h, std::span<const Operator> jumps, const DenseMat& rho);

struct SteadyStateReport {
  double residual = 0.0;  // ‖𝓛 vec ρ‖ / ‖vec ρ‖ before repair
  double min_eigenvalue = 0.0;
  bool used_fallback = false;
  int krylov_iterations = 0;  // 0 for direct solves
};

struct SteadyStateOptions {
  double residual_tol = 1e-8;
  /// Row replaced by the trace constraint; −1 picks the first diagonal element.
  int constraint_row = -1;
};

/// Unique null vector of 𝓛 normalized to unit trace. The basis must contain
/// the diagonal. Throws SolverError on singular solves, residuals above
/// tolerance, or a degenerate null space.
DensityMatrix steady_state(const Superoperator& l, const SteadyStateOptions& opt = {},
                           SteadyStateReport* report = nullptr);

/// Steady state of a model, solved in the zero-charge sector whenever the
/// Hamiltonian conserves excitation charge (tickle off). With the tickle on,
/// the full space is solved by GMRES preconditioned with the exact sector
/// blocks of the charge-conserving part, falling back to a direct solve.
DensityMatrix steady_state(const SystemSpec& spec, const SteadyStateOptions& opt = {},
                           SteadyStateReport* report = nullptr);

enum class Integrator { dopri5, sdirk4 };

struct EvolveOptions {
  Integrator method = Integrator::dopri5;
  /// Tight enough that snapshots of pure states stay above the −1e-8
  /// eigenvalue floor.
  ode::Options ode{.rtol = 1e-10, .atol = 1e-12};
};

/// Integrates vec ρ̇ = 𝓛 vec ρ from `v0` and calls `observe(index, t, v)` at
/// each time of `t_grid` (ms). Returning false stops early.
ode::Stats evolve_vector(const Superoperator& l, const DenseVec& v0, std::span<const double> t_grid,
                         const std::function<bool(int, double, const DenseVec&)>& observe,
                         const EvolveOptions& opt = {});

/// Full trajectory of hermitized, validated snapshots.
std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const Superoperator& l,
                                  std::span<const double> t_grid, const EvolveOptions& opt = {});

/// Tr(ρO).
Complex expectation(const DensityMatrix& rho, const Operator& o);
Complex expectation(const DenseMat& rho, const Operator& o);

struct PhononDistribution {
  std::vector<double> p;
  double mean = 0.0;
  double tail_mass = 0.0;  // P(N−1)
  bool truncation_warning = false;
};

inline constexpr double kTailMassWarning = 1e-3;

PhononDistribution phonon_distribution(const DensityMatrix& rho, const SpaceLayout& layout);

/// Partial trace over both ions.
DenseMat motional_state(const DensityMatrix& rho, const SpaceLayout& layout);

/// ½ Σ|λ_i| of ρ − σ.
double trace_distance(const DenseMat& rho, const DenseMat& sigma);

/// Coherent-state amplitudes <n|α> on `n` Fock states.
DenseVec coherent_state(Complex alpha, int n);

}  // namespace phlaser
