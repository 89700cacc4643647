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

// Adaptive Dormand-Prince 5(4) integrator with Hairer's 4th-order continuous
// extension, plus an L-stable SDIRK 4(3) method for stiff linear systems.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <complex>
#include <memory>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "phlaser/error.hpp"

namespace phlaser::ode {

struct Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0: automatic
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
  bool stopped_early = false;
  double t_final = 0.0;
};

namespace detail {

template <class Vec>
double scaled_rms(const Vec& e, const Vec& y0, const Vec& y1, const Options& o) {
  double acc = 0.0;
  const auto n = e.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(e[i]) / sc;
    acc += r * r;
  }
  return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

}  // namespace detail

/// Integrates y' = f(t, y) from t0 and reports y at each time in `t_out`
/// (non-decreasing, all >= t0) through `observe(index, t, y) -> bool`.
/// Returning false from the observer stops the integration.
///
/// `f` has signature void(double t, const Vec& y, Vec& dydt).
template <class Vec, class Rhs, class Observer>
Stats dopri5(Rhs&& f, double t0, Vec y, std::span<const double> t_out, Observer&& observe,
             const Options& opt = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  Stats st;
  size_t next = 0;
  double t = t0;
  while (next < t_out.size() && t_out[next] <= t0) {
    if (t_out[next] < t0) throw SolverError("dopri5: output time before start time");
    if (!observe(static_cast<int>(next), t_out[next], y)) {
      st.stopped_early = true;
      st.t_final = t;
      return st;
    }
    ++next;
  }
  if (next == t_out.size()) {
    st.t_final = t;
    return st;
  }
  const double t_end = t_out.back();

  const auto n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  f(t, y, k1);
  ++st.rhs_evals;

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const Vec zero = Vec::Zero(n);
    const double dy0 = detail::scaled_rms(y, y, zero, opt);
    const double df0 = detail::scaled_rms(k1, y, zero, opt);
    double h0 = (dy0 < 1e-5 || df0 < 1e-5) ? 1e-6 : 0.01 * dy0 / df0;
    h0 = std::min(h0, t_end - t);
    ytmp = y + h0 * k1;
    f(t + h0, ytmp, k2);
    ++st.rhs_evals;
    const double d2 = detail::scaled_rms(Vec(k2 - k1), y, zero, opt) / h0;
    const double dmax = std::max(df0, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min({h, opt.max_step, t_end - t});

  bool last_rejected = false;
  while (next < t_out.size()) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      throw SolverError("dopri5: maximum number of steps exceeded");
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw SolverError("dopri5: step size underflow at t = " + std::to_string(t));
    }
    if (t + h > t_end) h = t_end - t;

    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, ynew, k7);
    st.rhs_evals += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double e = detail::scaled_rms(err, y, ynew, opt);

    if (!std::isfinite(e)) {
      h *= 0.1;
      ++st.rejected;
      last_rejected = true;
      continue;
    }
    double fac = e == 0.0 ? 5.0 : 0.9 * std::pow(e, -0.2);
    if (e <= 1.0) {
      const double t_new = t + h;
      // Dense output for every requested time inside (t, t_new].
      if (next < t_out.size() && t_out[next] <= t_new) {
        const Vec ydiff = ynew - y;
        const Vec bspl = h * k1 - ydiff;
        const Vec r4 = ydiff - h * k7 - bspl;
        const Vec r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next < t_out.size() && t_out[next] <= t_new) {
          const double th = (t_out[next] - t) / h;
          const double th1 = 1.0 - th;
          ytmp = t_out[next] == t_new ? ynew
                                      : Vec(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
          if (!observe(static_cast<int>(next), t_out[next], ytmp)) {
            st.stopped_early = true;
            st.t_final = t_out[next];
            ++st.accepted;
            return st;
          }
          ++next;
        }
      }
      y.swap(ynew);
      k1.swap(k7);
      t = t_new;
      ++st.accepted;
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      last_rejected = false;
    } else {
      fac = std::clamp(fac, 0.2, 1.0);
      ++st.rejected;
      last_rejected = true;
    }
    h = std::min(h * fac, opt.max_step);
  }
  st.t_final = t;
  return st;
}

/// Hairer-Wanner 5-stage SDIRK of order 4 (embedded order 3), γ = 1/4.
struct Sdirk4Tableau {
  static constexpr int stages = 5;
  static constexpr double gamma = 0.25;
  static constexpr std::array<double, 5> c{0.25, 0.75, 11.0 / 20, 0.5, 1.0};
  static constexpr std::array<std::array<double, 5>, 5> a{{
      {0.25, 0, 0, 0, 0},
      {0.5, 0.25, 0, 0, 0},
      {17.0 / 50, -1.0 / 25, 0.25, 0, 0},
      {371.0 / 1360, -137.0 / 2720, 15.0 / 544, 0.25, 0},
      {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 0.25},
  }};
  static constexpr std::array<double, 5> b{25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 0.25};
  static constexpr std::array<double, 5> bhat{59.0 / 48, -17.0 / 96, 225.0 / 32, -85.0 / 12, 0.0};
};

/// Integrates the autonomous linear system y' = A y. Each stage solves
/// (I − hγA) k = A(y + h Σ a_ij k_j) with a sparse LU that is reused while the
/// step size is unchanged. Output times are hit exactly (no interpolation).
/// The local error estimate is filtered through (I − hγA)⁻¹.
template <class Observer>
Stats sdirk4_linear(const Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>& a_mat,
                    double t0, Eigen::VectorXcd y, std::span<const double> t_out,
                    Observer&& observe, const Options& opt = {}) {
  using Vec = Eigen::VectorXcd;
  using ColMat = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor>;
  using T = Sdirk4Tableau;
  using Lu = Eigen::SparseLU<ColMat, Eigen::COLAMDOrdering<int>>;

  Stats st;
  size_t next = 0;
  double t = t0;
  auto emit = [&](double tt, const Vec& v) {
    if (!observe(static_cast<int>(next), tt, v)) {
      st.stopped_early = true;
      st.t_final = tt;
      return false;
    }
    ++next;
    return true;
  };
  while (next < t_out.size() && t_out[next] <= t0) {
    if (t_out[next] < t0) throw SolverError("sdirk4: output time before start time");
    if (!emit(t_out[next], y)) return st;
  }
  if (next == t_out.size()) {
    st.t_final = t;
    return st;
  }
  const double t_end = t_out.back();
  const auto n = y.size();
  const ColMat acol(a_mat);
  ColMat ident(n, n);
  ident.setIdentity();

  struct Factor {
    double h = -1.0;
    std::unique_ptr<Lu> lu;
  };
  // Slot 0 follows the controller, slot 1 serves steps shortened to land on
  // an output time.
  std::array<Factor, 2> cache;
  const ColMat pattern = ident - acol;
  auto factor_for = [&](double h, int slot) -> Lu& {
    Factor& f = cache[slot];
    if (f.h != h) {
      if (!f.lu) {
        f.lu = std::make_unique<Lu>();
        f.lu->analyzePattern(pattern);
      }
      const ColMat m = ident - (h * T::gamma) * acol;
      f.lu->factorize(m);
      if (f.lu->info() != Eigen::Success) {
        throw SolverError("sdirk4: factorization of I - h*gamma*A failed");
      }
      f.h = h;
    }
    return *f.lu;
  };

  double h = opt.initial_step > 0.0 ? opt.initial_step : 1e-4 * (t_end - t0);
  h = std::min({h, opt.max_step, t_end - t});
  std::array<Vec, 5> k;
  Vec acc(n), ynew(n), err(n);
  bool last_rejected = false;

  while (next < t_out.size()) {
    if (st.accepted + st.rejected >= opt.max_steps) {
      throw SolverError("sdirk4: maximum number of steps exceeded");
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw SolverError("sdirk4: step size underflow at t = " + std::to_string(t));
    }
    double hs = h;
    int slot = 0;
    bool lands = false;
    if (t + 1.01 * h >= t_out[next]) {
      hs = t_out[next] - t;
      lands = true;
      slot = hs == h ? 0 : 1;
    }
    Lu& lu = factor_for(hs, slot);
    for (int i = 0; i < T::stages; ++i) {
      acc = y;
      for (int j = 0; j < i; ++j) acc += (hs * T::a[i][j]) * k[j];
      k[i] = lu.solve(Vec(acol * acc));
      ++st.rhs_evals;
    }
    ynew = y;
    err.setZero();
    for (int i = 0; i < T::stages; ++i) {
      ynew += (hs * T::b[i]) * k[i];
      err += (hs * (T::b[i] - T::bhat[i])) * k[i];
    }
    err = lu.solve(err);
    const double e = detail::scaled_rms(err, y, ynew, opt);
    if (!std::isfinite(e) || e > 1.0) {
      ++st.rejected;
      last_rejected = true;
      const double fac = std::isfinite(e) ? std::clamp(0.9 * std::pow(e, -0.25), 0.2, 1.0) : 0.1;
      h = std::min(hs, h) * fac;
      continue;
    }
    ++st.accepted;
    t += hs;
    y.swap(ynew);
    if (lands) {
      t = t_out[next];
      while (next < t_out.size() && t_out[next] <= t) {
        if (!emit(t_out[next], y)) return st;
      }
    }
    double fac = e == 0.0 ? 5.0 : 0.9 * std::pow(e, -0.25);
    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
    last_rejected = false;
    // Keep the factorization when the controller asks for a modest increase.
    if (slot == 0 && fac >= 1.0 && fac < 1.5) fac = 1.0;
    if (slot == 0) h = std::min(hs * fac, opt.max_step);
    else h = std::min(std::max(h, hs) * std::min(fac, 1.0), opt.max_step);
  }
  st.t_final = t;
  return st;
}

}  // namespace phlaser::ode
