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

#include "phlaser/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phlaser/error.hpp"
#include "phlaser/parallel.hpp"

namespace phlaser {

namespace {

constexpr double kPi = std::numbers::pi;

// Leading block of ρ that holds all population above 1e-16 (coherences of
// empty levels vanish by positivity).
int support_dim(const DenseMat& rho) {
  int k = static_cast<int>(rho.rows());
  while (k > 1 && std::abs(rho(k - 1, k - 1).real()) < 1e-16) --k;
  return k;
}

bool uniform(std::span<const double> g, double* step) {
  if (g.size() < 2) return false;
  const double h = (g.back() - g.front()) / static_cast<double>(g.size() - 1);
  for (size_t i = 1; i < g.size(); ++i) {
    if (std::abs(g[i] - g[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
  }
  *step = h;
  return h > 0.0;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double interp(std::span<const double> x, std::span<const double> y, double at) {
  if (at <= x.front()) return at == x.front() ? y.front() : 0.0;
  if (at >= x.back()) return at == x.back() ? y.back() : 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const size_t i = static_cast<size_t>(it - x.begin());
  const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

}  // namespace

std::vector<double> symmetric_grid(double half_width, double step) {
  if (!(half_width >= 0.0) || !(step > 0.0)) throw InvalidArgument("symmetric_grid: need half_width >= 0, step > 0");
  const double m = half_width / step;
  const long k = std::lround(m);
  if (std::abs(m - static_cast<double>(k)) > 1e-9 * std::max(1.0, m)) {
    throw InvalidArgument("symmetric_grid: step does not divide half_width");
  }
  std::vector<double> g;
  g.reserve(static_cast<size_t>(2 * k + 1));
  for (long i = -k; i <= k; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}

std::vector<double> default_beta_grid() { return symmetric_grid(0.7, 0.02); }

double CharFunSamples::quadrature_angle() const { return axis_angle - 0.5 * kPi; }

CharFunSamples char_fun(const DensityMatrix& rho, double phi, std::span<const double> grid, int workers) {
  const int k = support_dim(rho.matrix());
  const DenseMat r = rho.matrix().topLeftCorner(k, k);
  CharFunSamples s;
  s.axis_angle = phi;
  s.grid.assign(grid.begin(), grid.end());
  s.values.resize(grid.size());
  const Complex dir = std::polar(1.0, phi);
  parallel_for(static_cast<int>(grid.size()), workers, [&](int i) {
    const DenseMat d = displacement_dense(grid[i] * dir, k, k);
    s.values[i] = r.cwiseProduct(d.transpose()).sum();
  });
  for (double b : grid) s.beyond_safe_range |= std::abs(b) > kCharFunSafeBeta + 1e-12;
  return s;
}

CharFunSamples char_fun(const DensityMatrix& rho, const SpaceLayout& layout, double phi,
                        std::span<const double> grid, int workers) {
  return char_fun(DensityMatrix::repaired(motional_state(rho, layout)), phi, grid, workers);
}

std::vector<double> conjugate_grid(double beta_step, double pad_to) {
  const long half = std::lround(pad_to / beta_step);
  const long m = 2 * half + 1;
  const double dx = 2.0 * kPi / (static_cast<double>(m) * std::numbers::sqrt2 * beta_step);
  std::vector<double> x;
  x.reserve(static_cast<size_t>(m));
  for (long j = -half; j <= half; ++j) x.push_back(static_cast<double>(j) * dx);
  return x;
}

MarginalCurve marginal_from_charfun(const CharFunSamples& samples, double pad_to, std::span<const double> x_grid) {
  const auto& g = samples.grid;
  if (g.size() != samples.values.size() || g.size() < 3) {
    throw InvalidArgument("marginal_from_charfun: need at least 3 samples matching the grid");
  }
  const double span = std::max(std::abs(g.front()), std::abs(g.back()));
  for (size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g[i] + g[g.size() - 1 - i]) > 1e-9 * std::max(1.0, span)) {
      throw InvalidArgument("marginal_from_charfun: grid is not symmetric about 0");
    }
  }
  if (pad_to < span - 1e-12) throw InvalidArgument("marginal_from_charfun: pad_to is smaller than max|beta|");

  // Uniform samples, resampled linearly at the smallest spacing if needed.
  std::vector<double> beta = g;
  std::vector<Complex> c = samples.values;
  double step = 0.0;
  if (!uniform(g, &step)) {
    step = span;
    for (size_t i = 1; i < g.size(); ++i) step = std::min(step, g[i] - g[i - 1]);
    if (!(step > 0.0)) throw InvalidArgument("marginal_from_charfun: grid must be increasing");
    beta = symmetric_grid(std::floor(span / step + 1e-9) * step, step);
    std::vector<double> re(g.size()), im(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
      re[i] = samples.values[i].real();
      im[i] = samples.values[i].imag();
    }
    c.resize(beta.size());
    for (size_t i = 0; i < beta.size(); ++i) c[i] = {interp(g, re, beta[i]), interp(g, im, beta[i])};
  }

  MarginalCurve out;
  out.quadrature_angle = samples.quadrature_angle();
  out.x = x_grid.empty() ? conjugate_grid(step, pad_to) : std::vector<double>(x_grid.begin(), x_grid.end());
  // Zero padding adds nothing to the sum; it only sets the conjugate grid.
  const double dl = std::numbers::sqrt2 * step;
  std::vector<double> p(out.x.size());
  for (size_t j = 0; j < out.x.size(); ++j) {
    Complex acc = 0.0;
    for (size_t k = 0; k < beta.size(); ++k) {
      acc += c[k] * std::polar(1.0, -std::numbers::sqrt2 * beta[k] * out.x[j]);
    }
    p[j] = (acc * dl / (2.0 * kPi)).real();
  }
  out.raw_integral = trapezoid(out.x, p);
  if (!(out.raw_integral > 0.0)) throw SolverError("marginal_from_charfun: non-positive integral");
  out.raw_min = 0.0;
  for (double& v : p) {
    v /= out.raw_integral;
    out.raw_min = std::min(out.raw_min, v);
    v = std::max(v, 0.0);
  }
  out.density = std::move(p);
  out.ringing_warning = std::abs(out.raw_min) * (out.x.back() - out.x.front()) > kRingingBudget;
  return out;
}

double MarginalCurve::integral() const { return trapezoid(x, density); }

WignerGrid wigner(const DensityMatrix& rho, std::span<const double> x, std::span<const double> p, double angle,
                  int workers) {
  if (x.size() < 2 || p.size() < 2) throw InvalidArgument("wigner: grids need at least two points");
  const int k = support_dim(rho.matrix());
  // D(α) Π D†(α) = D(2α) Π, so W = (2/π) Σ ρ_mn (−1)^m <n|D(2α)|m>.
  DenseMat r = rho.matrix().topLeftCorner(k, k);
  for (int m = 1; m < k; m += 2) r.row(m) *= -1.0;
  WignerGrid w;
  w.angle = angle;
  w.x.assign(x.begin(), x.end());
  w.p.assign(p.begin(), p.end());
  w.values.resize(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(x.size()));
  const Complex rot = std::polar(1.0, angle) * std::numbers::sqrt2;  // 2α = √2 e^{iψ}(x + ip)
  const int nx = static_cast<int>(x.size());
  parallel_for(static_cast<int>(x.size() * p.size()), workers, [&](int idx) {
    const int i = idx / nx, j = idx % nx;
    const DenseMat d = displacement_dense(rot * Complex(x[j], p[i]), k, k);
    w.values(i, j) = 2.0 / kPi * r.cwiseProduct(d.transpose()).sum().real();
  });
  double edge = 0.0;
  const Eigen::Index rows = w.values.rows(), cols = w.values.cols();
  edge = std::max({w.values.row(0).cwiseAbs().maxCoeff(), w.values.row(rows - 1).cwiseAbs().maxCoeff(),
                   w.values.col(0).cwiseAbs().maxCoeff(), w.values.col(cols - 1).cwiseAbs().maxCoeff()});
  const double peak = w.values.cwiseAbs().maxCoeff();
  w.boundary_ratio = peak > 0.0 ? edge / peak : 0.0;
  w.boundary_warning = w.boundary_ratio > kWignerBoundaryTol;
  return w;
}

double WignerGrid::integral() const {
  std::vector<double> col(p.size()), row(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    for (size_t i = 0; i < p.size(); ++i) col[i] = values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    row[j] = trapezoid(p, col);
  }
  return 0.5 * trapezoid(x, row);
}

MarginalCurve wigner_marginal(const WignerGrid& w) {
  MarginalCurve m;
  m.quadrature_angle = w.angle;
  m.x = w.x;
  m.density.resize(w.x.size());
  std::vector<double> col(w.p.size());
  for (size_t j = 0; j < w.x.size(); ++j) {
    for (size_t i = 0; i < w.p.size(); ++i) col[i] = w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    m.density[j] = 0.5 * trapezoid(w.p, col);
  }
  m.raw_integral = trapezoid(m.x, m.density);
  m.raw_min = *std::min_element(m.density.begin(), m.density.end());
  return m;
}

double l1_distance(const MarginalCurve& a, const MarginalCurve& b) {
  std::vector<double> d(a.x.size());
  for (size_t i = 0; i < a.x.size(); ++i) d[i] = std::abs(a.density[i] - interp(b.x, b.density, a.x[i]));
  return trapezoid(a.x, d);
}

PhaseDiffusionFit phase_variance_trace(std::span<const double> t, std::span<const Complex> a, double intensity) {
  if (t.size() != a.size() || t.empty()) throw InvalidArgument("phase_variance_trace: t and <a> sizes differ");
  if (!(intensity > 0.0)) throw InvalidArgument("phase_variance_trace: intensity must be positive");
  if (std::abs(std::norm(a[0]) / intensity - 1.0) > 0.05) {
    throw InvalidArgument("phase_variance_trace: |<a>(0)|^2 does not match the reference intensity");
  }
  PhaseDiffusionFit fit;
  const double root = std::sqrt(intensity);
  double stt = 0.0, sty = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    const double mag = std::abs(a[k]);
    if (mag < 1e-6 * root) {
      fit.saturated = true;
      break;
    }
    const double th = -2.0 * std::log(mag / root);
    const double w = mag * mag / intensity;
    fit.t.push_back(t[k]);
    fit.theta_sq.push_back(th);
    stt += w * t[k] * t[k];
    sty += w * t[k] * th;
    ++fit.points_used;
  }
  fit.rate = stt > 0.0 ? sty / stt : 0.0;
  return fit;
}

DensityMatrix coherent_start(Complex alpha, const SpaceLayout& layout) {
  const DenseVec coh = coherent_state(alpha, layout.fock_cutoff);
  DenseVec psi = DenseVec::Zero(layout.joint_dim());
  for (int n = 0; n < layout.fock_cutoff; ++n) psi[layout.index(n, kBright, 0)] = coh[n];
  return DensityMatrix::pure(psi);
}

std::vector<Complex> amplitude_trajectory(const SystemSpec& spec, const DensityMatrix& rho0,
                                          std::span<const double> t_grid, const EvolveOptions& opt) {
  spec.validate();
  if (rho0.dim() != spec.layout.joint_dim()) throw DimensionError("amplitude_trajectory: state dimension mismatch");
  const Operator h = build_hamiltonian(spec);
  const std::vector<Operator> jumps = build_jump_ops(spec);
  // <a> = Σ ρ_ij a_ji only involves pairs with q_i − q_j = +2.
  const LiouvilleBasis basis = spec.tickle.enabled && spec.tickle.g_t > 0.0
                                   ? LiouvilleBasis::full(spec.layout.joint_dim())
                                   : LiouvilleBasis::sector(excitation_charges(spec.layout), 2);
  const Superoperator l = liouvillian(h, jumps, basis);
  const DenseMat a = motional_annihilation(spec.layout).dense();
  std::vector<Complex> out;
  out.reserve(t_grid.size());
  evolve_vector(l, basis.vectorize(rho0.matrix()), t_grid,
                [&](int, double, const DenseVec& v) {
                  Complex e = 0.0;
                  for (int i = 0; i < basis.size(); ++i) {
                    const auto [r, c] = basis.element(i);
                    e += v[i] * a(c, r);
                  }
                  out.push_back(e);
                  return true;
                },
                opt);
  return out;
}

}  // namespace phlaser
