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

#include "phlaser/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>

#include "phlaser/error.hpp"

namespace phlaser {

namespace {

using ColMat = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;
using Lu = Eigen::SparseLU<ColMat, Eigen::COLAMDOrdering<int>>;

constexpr double kNegativeEigTol = 1e-8;

double hermiticity_error(const DenseMat& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

// --- DensityMatrix -----------------------------------------------------------

DensityMatrix DensityMatrix::from_dense(const DenseMat& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("density matrix must be square");
  if (!m.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if (hermiticity_error(m) > tol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > tol) throw InvalidArgument("density matrix trace is not 1");
  const DenseMat herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMat> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNegativeEigTol) {
    throw InvalidArgument("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(herm);
}

DensityMatrix DensityMatrix::repaired(const DenseMat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("density matrix must be square");
  if (!m.allFinite()) throw SolverError("state has non-finite entries");
  DenseMat herm = 0.5 * (m + m.adjoint());
  const double tr = herm.trace().real();
  if (!(tr > 0.0)) throw SolverError("state has non-positive trace");
  herm /= tr;
  Eigen::SelfAdjointEigenSolver<DenseMat> es(herm);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kNegativeEigTol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "state has eigenvalue %.3e below -1e-8", min_eig);
    throw SolverError(buf);
  }
  if (min_eig < 0.0) {
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    herm = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    herm = 0.5 * (herm + herm.adjoint());
  }
  return DensityMatrix(herm);
}

DensityMatrix DensityMatrix::pure(const DenseVec& psi) {
  const double nrm = psi.norm();
  if (!(nrm > 0.0)) throw InvalidArgument("pure state vector has zero norm");
  const DenseVec v = psi / nrm;
  return DensityMatrix(v * v.adjoint());
}

// --- LiouvilleBasis ----------------------------------------------------------

LiouvilleBasis LiouvilleBasis::full(int dim) {
  if (dim < 1) throw DimensionError("Liouville basis needs a positive dimension");
  LiouvilleBasis b;
  b.dim_ = dim;
  b.full_ = true;
  const size_t n = static_cast<size_t>(dim) * dim;
  b.pairs_.reserve(n);
  b.lookup_.resize(n);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      b.lookup_[i + static_cast<size_t>(j) * dim] = static_cast<int>(b.pairs_.size());
      b.pairs_.emplace_back(i, j);
    }
  }
  return b;
}

LiouvilleBasis LiouvilleBasis::sector(std::span<const int> charges, int k) {
  const int dim = static_cast<int>(charges.size());
  if (dim < 1) throw DimensionError("Liouville basis needs a positive dimension");
  LiouvilleBasis b;
  b.dim_ = dim;
  b.lookup_.assign(static_cast<size_t>(dim) * dim, -1);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      if (charges[i] - charges[j] != k) continue;
      b.lookup_[i + static_cast<size_t>(j) * dim] = static_cast<int>(b.pairs_.size());
      b.pairs_.emplace_back(i, j);
    }
  }
  b.full_ = b.pairs_.size() == static_cast<size_t>(dim) * dim;
  return b;
}

DenseVec LiouvilleBasis::vectorize(const DenseMat& m) const {
  if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("vectorize: dimension mismatch");
  DenseVec v(size());
  for (int k = 0; k < size(); ++k) v[k] = m(pairs_[k].first, pairs_[k].second);
  return v;
}

DenseMat LiouvilleBasis::unvectorize(const DenseVec& v) const {
  if (v.size() != size()) throw DimensionError("unvectorize: length mismatch");
  DenseMat m = DenseMat::Zero(dim_, dim_);
  for (int k = 0; k < size(); ++k) m(pairs_[k].first, pairs_[k].second) = v[k];
  return m;
}

DenseVec LiouvilleBasis::trace_functional() const {
  DenseVec r = DenseVec::Zero(size());
  for (int i = 0; i < dim_; ++i) {
    const int k = index(i, i);
    if (k >= 0) r[k] = 1.0;
  }
  return r;
}

// --- Superoperator -----------------------------------------------------------

Superoperator::Superoperator(SparseMat m, LiouvilleBasis basis) : m_(std::move(m)), basis_(std::move(basis)) {
  if (m_.rows() != basis_.size() || m_.cols() != basis_.size()) {
    throw DimensionError("superoperator size does not match its basis");
  }
}

Superoperator liouvillian(const Operator& h, std::span<const Operator> jumps) {
  return liouvillian(h, jumps, LiouvilleBasis::full(h.dim()));
}

Superoperator liouvillian(const Operator& h, std::span<const Operator> jumps,
                          const LiouvilleBasis& basis) {
  const int dim = h.dim();
  if (basis.hilbert_dim() != dim) throw DimensionError("liouvillian: basis does not match H");
  for (const auto& l : jumps) {
    if (l.dim() != dim) throw DimensionError("liouvillian: jump operator dimension mismatch");
  }

  // 𝓛ρ = Kρ + ρK† + Σ LρL† with K = −iH − ½ Σ L†L. Column (i, j) of 𝓛 is the
  // image of |i><j|, assembled from columns of K and L.
  SparseMat k_row = (Complex(0.0, -1.0) * h).sparse();
  for (const auto& l : jumps) k_row -= 0.5 * SparseMat(l.adjoint().sparse() * l.sparse());
  const ColMat k(k_row);
  std::vector<ColMat> lc;
  lc.reserve(jumps.size());
  for (const auto& l : jumps) lc.emplace_back(l.sparse());

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(basis.size()) * (2 * (k.nonZeros() / std::max(dim, 1) + 1) + 4));
  auto put = [&](int r, int c, int col, Complex v) {
    const int row = basis.index(r, c);
    if (row < 0) {
      if (v != Complex(0.0)) {
        throw InvalidArgument("liouvillian: basis is not invariant under the generator");
      }
      return;
    }
    trip.emplace_back(row, col, v);
  };

  for (int col = 0; col < basis.size(); ++col) {
    const auto [i, j] = basis.element(col);
    for (ColMat::InnerIterator it(k, i); it; ++it) put(static_cast<int>(it.row()), j, col, it.value());
    for (ColMat::InnerIterator it(k, j); it; ++it) put(i, static_cast<int>(it.row()), col, std::conj(it.value()));
    for (const auto& l : lc) {
      for (ColMat::InnerIterator ri(l, i); ri; ++ri) {
        for (ColMat::InnerIterator cj(l, j); cj; ++cj) {
          put(static_cast<int>(ri.row()), static_cast<int>(cj.row()), col, ri.value() * std::conj(cj.value()));
        }
      }
    }
  }
  SparseMat m(basis.size(), basis.size());
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(Complex(0.0));
  return Superoperator(std::move(m), basis);
}

DenseMat lindblad_rhs(const Operator& h, std::span<const Operator> jumps, const DenseMat& rho) {
  if (rho.rows() != h.dim() || rho.cols() != h.dim()) throw DimensionError("lindblad_rhs: dimension mismatch");
  const DenseMat hd = h.dense();
  DenseMat out = Complex(0.0, -1.0) * (hd * rho - rho * hd);
  for (const auto& op : jumps) {
    const DenseMat l = op.dense();
    const DenseMat ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

// --- steady state ------------------------------------------------------------

namespace {

double relative_residual(const Superoperator& l, const DenseVec& x) {
  return (l.matrix() * x).norm() / x.norm();
}

// Two-vector shift-invert subspace iteration near zero. Returns the Ritz vector
// of the eigenvalue closest to the origin and throws if both are null.
DenseVec shift_invert_null_vector(const Superoperator& l, double scale, double tol) {
  const int n = l.size();
  const double sigma = -1e-6 * scale;
  ColMat shifted(l.matrix());
  ColMat ident(n, n);
  ident.setIdentity();
  shifted = shifted - Complex(sigma) * ident;
  Lu lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) throw SolverError("steady_state: shift-invert factorization failed");

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  DenseMat q(n, 2);
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < n; ++r) q(r, c) = Complex(nd(rng), nd(rng));
  for (int it = 0; it < 40; ++it) {
    DenseMat z(n, 2);
    for (int c = 0; c < 2; ++c) z.col(c) = lu.solve(DenseVec(q.col(c)));
    Eigen::HouseholderQR<DenseMat> qr(z);
    q = qr.householderQ() * DenseMat::Identity(n, 2);
  }
  DenseMat lq(n, 2);
  for (int c = 0; c < 2; ++c) lq.col(c) = l.matrix() * DenseVec(q.col(c));
  const DenseMat proj = q.adjoint() * lq;
  Eigen::ComplexEigenSolver<DenseMat> es(proj);
  const auto& ev = es.eigenvalues();
  const double thresh = tol * scale;
  if (std::abs(ev[0]) < thresh && std::abs(ev[1]) < thresh) {
    throw SolverError("steady_state: degenerate null space (dimension > 1)");
  }
  const int pick = std::abs(ev[0]) <= std::abs(ev[1]) ? 0 : 1;
  return q * es.eigenvectors().col(pick);
}

}  // namespace

namespace {

double max_abs_entry(const SparseMat& m) {
  double scale = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  return scale;
}

// 𝓛 with row r0 replaced by the trace functional times `scale`.
ColMat constrained(const Superoperator& l, int r0, double scale) {
  const LiouvilleBasis& basis = l.basis();
  std::vector<Triplet> trip;
  trip.reserve(l.matrix().nonZeros() + basis.hilbert_dim());
  for (int r = 0; r < l.size(); ++r) {
    if (r == r0) continue;
    for (SparseMat::InnerIterator it(l.matrix(), r); it; ++it) trip.emplace_back(r, it.col(), it.value());
  }
  for (int i = 0; i < basis.hilbert_dim(); ++i) trip.emplace_back(r0, basis.index(i, i), scale);
  ColMat a(l.size(), l.size());
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  return a;
}

void check_diagonal(const LiouvilleBasis& basis) {
  for (int i = 0; i < basis.hilbert_dim(); ++i) {
    if (basis.index(i, i) < 0) throw InvalidArgument("steady_state: basis must contain the diagonal");
  }
}

// Normalizes, checks the residual and repairs.
DensityMatrix finish(const Superoperator& l, DenseVec x, const SteadyStateOptions& opt, SteadyStateReport rep,
                     SteadyStateReport* report) {
  const LiouvilleBasis& basis = l.basis();
  const Complex tr = basis.trace_functional().dot(x);  // conj-linear in the first slot, which is real
  if (std::abs(tr) == 0.0) throw SolverError("steady_state: null vector has zero trace");
  x /= tr;
  rep.residual = relative_residual(l, x);
  if (!(rep.residual < opt.residual_tol)) {
    throw SolverError("steady_state: residual " + std::to_string(rep.residual) + " above tolerance");
  }
  const DenseMat raw = basis.unvectorize(x);
  DensityMatrix rho = DensityMatrix::repaired(raw);
  Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (raw + raw.adjoint()), Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  if (report) *report = rep;
  return rho;
}

// Block-diagonal preconditioner: exact LU of the charge-conserving part of 𝓛
// in every sector, with the trace row in the k = 0 block.
class SectorPreconditioner {
 public:
  struct Block {
    std::vector<int> index;  // positions in the full basis
    std::unique_ptr<Lu> lu;
  };

  SectorPreconditioner() = default;
  template <class M>
  explicit SectorPreconditioner(const M&) {}
  template <class M>
  SectorPreconditioner& analyzePattern(const M&) { return *this; }
  template <class M>
  SectorPreconditioner& factorize(const M&) { return *this; }
  template <class M>
  SectorPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() { return Eigen::Success; }

  template <class Rhs>
  DenseVec solve(const Rhs& b) const {
    DenseVec x(b.size());
    for (const Block& blk : *blocks_) {
      DenseVec bs(static_cast<Eigen::Index>(blk.index.size()));
      for (size_t k = 0; k < blk.index.size(); ++k) bs[static_cast<Eigen::Index>(k)] = b[blk.index[k]];
      const DenseVec xs = blk.lu->solve(bs);
      for (size_t k = 0; k < blk.index.size(); ++k) x[blk.index[k]] = xs[static_cast<Eigen::Index>(k)];
    }
    return x;
  }

  void set_blocks(std::shared_ptr<const std::vector<Block>> b) { blocks_ = std::move(b); }

 private:
  std::shared_ptr<const std::vector<Block>> blocks_;
};

// GMRES on the full constrained system. Returns an empty vector when a block
// factorization fails or the iteration does not converge.
DenseVec sector_preconditioned_solve(const SystemSpec& spec, const std::vector<Operator>& jumps,
                                     const Superoperator& full, double scale, int* iterations) {
  SystemSpec conserving = spec;
  conserving.tickle.enabled = false;
  const Operator h0 = build_hamiltonian(conserving);
  const std::vector<int> charges = excitation_charges(spec.layout);
  const auto [qmin, qmax] = std::minmax_element(charges.begin(), charges.end());
  const int dim = spec.layout.joint_dim();
  auto blocks = std::make_shared<std::vector<SectorPreconditioner::Block>>();
  for (int k = *qmin - *qmax; k <= *qmax - *qmin; ++k) {
    const LiouvilleBasis b = LiouvilleBasis::sector(charges, k);
    if (b.size() == 0) continue;
    const Superoperator ls = liouvillian(h0, jumps, b);
    SectorPreconditioner::Block blk;
    blk.index.resize(static_cast<size_t>(b.size()));
    for (int i = 0; i < b.size(); ++i) {
      const auto [r, c] = b.element(i);
      blk.index[static_cast<size_t>(i)] = r + c * dim;
    }
    blk.lu = std::make_unique<Lu>();
    // The full constraint row is (0,0), the first diagonal pair of k = 0.
    if (k == 0) {
      blk.lu->compute(constrained(ls, b.index(0, 0), scale));
    } else {
      blk.lu->compute(ColMat(ls.matrix()));
    }
    if (blk.lu->info() != Eigen::Success) return {};
    blocks->push_back(std::move(blk));
  }
  const ColMat a = constrained(full, full.basis().index(0, 0), scale);
  Eigen::GMRES<ColMat, SectorPreconditioner> gmres;
  gmres.preconditioner().set_blocks(blocks);
  gmres.set_restart(200);
  gmres.setMaxIterations(2000);
  gmres.setTolerance(1e-13);
  gmres.compute(a);
  DenseVec b = DenseVec::Zero(full.size());
  b[full.basis().index(0, 0)] = scale;
  DenseVec x = gmres.solve(b);
  *iterations = static_cast<int>(gmres.iterations());
  if (gmres.info() != Eigen::Success || !x.allFinite()) return {};
  return x;
}

}  // namespace

DensityMatrix steady_state(const Superoperator& l, const SteadyStateOptions& opt,
                           SteadyStateReport* report) {
  const LiouvilleBasis& basis = l.basis();
  const int n = l.size();
  check_diagonal(basis);
  const int r0 = opt.constraint_row >= 0 ? opt.constraint_row : basis.index(0, 0);
  if (r0 >= n) throw InvalidArgument("steady_state: constraint row out of range");

  const double scale = max_abs_entry(l.matrix());
  if (scale == 0.0) throw SolverError("steady_state: generator is zero, null space is degenerate");
  const ColMat a = constrained(l, r0, scale);
  DenseVec b = DenseVec::Zero(n);
  b[r0] = scale;

  SteadyStateReport rep;
  DenseVec x;
  Lu lu;
  lu.compute(a);
  bool ok = lu.info() == Eigen::Success;
  if (ok) {
    x = lu.solve(b);
    for (int refine = 0; refine < 2 && x.allFinite(); ++refine) x += lu.solve(DenseVec(b - a * x));
    ok = x.allFinite();
    if (ok) {
      // Condition estimate by inverse iteration: a second null vector makes
      // the constrained system numerically singular.
      std::mt19937_64 rng(7);
      std::normal_distribution<double> nd;
      DenseVec v(n);
      for (int k = 0; k < n; ++k) v[k] = Complex(nd(rng), nd(rng));
      v.normalize();
      double growth = 0.0;
      for (int it = 0; it < 3; ++it) {
        DenseVec z = lu.solve(v);
        growth = z.norm();
        v = z / growth;
      }
      if (!std::isfinite(growth) || growth * scale > 1e13) {
        throw SolverError("steady_state: degenerate null space (dimension > 1)");
      }
    }
  }
  if (!ok) {
    rep.used_fallback = true;
    x = shift_invert_null_vector(l, scale, 1e-9);
  }
  return finish(l, std::move(x), opt, rep, report);
}

DensityMatrix steady_state(const SystemSpec& spec, const SteadyStateOptions& opt,
                           SteadyStateReport* report) {
  const Operator h = build_hamiltonian(spec);
  const auto jumps = build_jump_ops(spec);
  const bool symmetric = !(spec.tickle.enabled && spec.tickle.g_t > 0.0);
  if (symmetric) {
    return steady_state(liouvillian(h, jumps, LiouvilleBasis::sector(excitation_charges(spec.layout), 0)), opt,
                        report);
  }
  // The tickle couples neighbouring sectors. Its full-space system is solved
  // by GMRES preconditioned with the sector blocks, with the direct solve as
  // fallback.
  const Superoperator full = liouvillian(h, jumps);
  if (opt.constraint_row < 0) {
    const double scale = max_abs_entry(full.matrix());
    int iterations = 0;
    if (scale > 0.0) {
      DenseVec x = sector_preconditioned_solve(spec, jumps, full, scale, &iterations);
      if (x.size() > 0) {
        SteadyStateReport rep;
        rep.krylov_iterations = iterations;
        if (relative_residual(full, x / full.basis().trace_functional().dot(x)) < opt.residual_tol) {
          return finish(full, std::move(x), opt, rep, report);
        }
      }
    }
  }
  return steady_state(full, opt, report);
}

// --- time evolution ----------------------------------------------------------

ode::Stats evolve_vector(const Superoperator& l, const DenseVec& v0, std::span<const double> t_grid,
                         const std::function<bool(int, double, const DenseVec&)>& observe,
                         const EvolveOptions& opt) {
  if (v0.size() != l.size()) throw DimensionError("evolve: state length does not match generator");
  if (t_grid.empty()) return {};
  for (size_t k = 1; k < t_grid.size(); ++k) {
    if (t_grid[k] < t_grid[k - 1]) throw InvalidArgument("evolve: time grid must be non-decreasing");
  }
  const double t0 = std::min(0.0, t_grid.front());
  if (opt.method == Integrator::sdirk4) {
    return ode::sdirk4_linear(l.matrix(), t0, v0, t_grid, observe, opt.ode);
  }
  const SparseMat& m = l.matrix();
  auto rhs = [&m](double, const DenseVec& y, DenseVec& dy) { dy.noalias() = m * y; };
  return ode::dopri5(rhs, t0, v0, t_grid, observe, opt.ode);
}

std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const Superoperator& l,
                                  std::span<const double> t_grid, const EvolveOptions& opt) {
  const LiouvilleBasis& basis = l.basis();
  if (rho0.dim() != basis.hilbert_dim()) throw DimensionError("evolve: state dimension mismatch");
  const DenseVec v0 = basis.vectorize(rho0.matrix());
  if (!basis.is_full()) {
    const double dropped = (basis.unvectorize(v0) - rho0.matrix()).norm();
    if (dropped > 1e-12) throw InvalidArgument("evolve: initial state has support outside the basis");
  }
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());
  evolve_vector(
      l, v0, t_grid,
      [&](int, double, const DenseVec& v) {
        out.push_back(DensityMatrix::repaired(basis.unvectorize(v)));
        return true;
      },
      opt);
  return out;
}

// --- observables -------------------------------------------------------------

Complex expectation(const DenseMat& rho, const Operator& o) {
  if (rho.rows() != o.dim()) throw DimensionError("expectation: dimension mismatch");
  // Tr(ρO) = Σ_{r,c} O(r,c) ρ(c,r).
  Complex s = 0.0;
  const SparseMat& m = o.sparse();
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMat::InnerIterator it(m, r); it; ++it) s += it.value() * rho(it.col(), r);
  return s;
}

Complex expectation(const DensityMatrix& rho, const Operator& o) { return expectation(rho.matrix(), o); }

PhononDistribution phonon_distribution(const DensityMatrix& rho, const SpaceLayout& layout) {
  if (rho.dim() != layout.joint_dim()) throw DimensionError("phonon_distribution: layout mismatch");
  const int s = layout.heating_levels * layout.cooling_levels;
  PhononDistribution d;
  d.p.assign(layout.fock_cutoff, 0.0);
  for (int n = 0; n < layout.fock_cutoff; ++n) {
    double acc = 0.0;
    for (int k = 0; k < s; ++k) acc += rho.matrix()(n * s + k, n * s + k).real();
    d.p[n] = acc;
    d.mean += n * acc;
  }
  d.tail_mass = d.p.back();
  d.truncation_warning = d.tail_mass > kTailMassWarning;
  return d;
}

DenseMat motional_state(const DensityMatrix& rho, const SpaceLayout& layout) {
  if (rho.dim() != layout.joint_dim()) throw DimensionError("motional_state: layout mismatch");
  const int s = layout.heating_levels * layout.cooling_levels;
  const int nf = layout.fock_cutoff;
  DenseMat m = DenseMat::Zero(nf, nf);
  for (int a = 0; a < nf; ++a)
    for (int b = 0; b < nf; ++b)
      for (int k = 0; k < s; ++k) m(a, b) += rho.matrix()(a * s + k, b * s + k);
  return m;
}

double trace_distance(const DenseMat& rho, const DenseMat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  const DenseMat d = rho - sigma;
  Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DenseVec coherent_state(Complex alpha, int n) {
  if (n < 1) throw DimensionError("coherent_state: need at least one Fock state");
  DenseVec v(n);
  v[0] = std::exp(-0.5 * std::norm(alpha));
  for (int k = 1; k < n; ++k) v[k] = v[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  return v;
}

}  // namespace phlaser
