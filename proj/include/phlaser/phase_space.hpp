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

#include <span>
#include <vector>

#include "phlaser/lindblad.hpp"

namespace phlaser {

// Quadrature convention: X_ψ = (a e^{−iψ} + a† e^{iψ}) / √2, so vacuum has
// variance 1/2 and a coherent state |α> has <X_0> = √2 Re α. The Weyl
// characteristic function C(β) = Tr ρ D(β) sampled along the direction e^{iφ}
// is the characteristic function of X_{φ−π/2}: C(β e^{iφ}) = <exp(iλ X_{φ−π/2})>
// with λ = √2 β.

/// Above this |β| the charfun grid is flagged. Matrix elements of D(β) are
/// exact, so the flag only marks departure from the measured range.
inline constexpr double kCharFunSafeBeta = 1.0;

/// Symmetric grid −h, −h + step, ..., h. Throws if step does not divide h.
std::vector<double> symmetric_grid(double half_width, double step);
/// Step 0.02 on [−0.7, 0.7].
std::vector<double> default_beta_grid();

struct CharFunSamples {
  double axis_angle = 0.0;  // φ, rad
  std::vector<double> grid;  // signed |β| along e^{iφ}
  std::vector<Complex> values;
  bool beyond_safe_range = false;

  /// Quadrature whose density marginal_from_charfun recovers.
  double quadrature_angle() const;
};

/// C(β e^{iφ}) for a motional density matrix (Fock dimension = rho.dim()).
CharFunSamples char_fun(const DensityMatrix& rho, double phi, std::span<const double> grid,
                        int workers = 0);
/// Same after tracing out both ions of a joint state.
CharFunSamples char_fun(const DensityMatrix& rho, const SpaceLayout& layout, double phi,
                        std::span<const double> grid, int workers = 0);

struct MarginalCurve {
  double quadrature_angle = 0.0;
  std::vector<double> x;
  std::vector<double> density;  // floored at 0
  double raw_integral = 0.0;    // ∫ Re P dx before normalization
  double raw_min = 0.0;         // min Re P after normalization, before flooring
  /// |raw_min| · (x range) exceeds kRingingBudget.
  bool ringing_warning = false;

  /// ∫ P dx by the trapezoid rule on x.
  double integral() const;
};

/// Allowed Fourier ringing, |min P| · (x range).
inline constexpr double kRingingBudget = 0.02;

/// Density of X_{φ−π/2} from charfun samples. The data are zero-extended to
/// ±pad_to and Fourier transformed, P(x) = (1/2π) Σ C(λ_k) e^{−iλ_k x} Δλ.
/// With an empty `x_grid` the result is sampled on the conjugate grid of the
/// padded sequence. Non-uniform grids are resampled linearly at their
/// smallest spacing. Throws InvalidArgument for asymmetric grids or
/// pad_to < max|β|.
MarginalCurve marginal_from_charfun(const CharFunSamples& samples, double pad_to = 1.0,
                                    std::span<const double> x_grid = {});

/// Conjugate quadrature grid of a grid with spacing `beta_step` padded to
/// ±pad_to: spacing 2π/(M Δλ), M points centered on 0.
std::vector<double> conjugate_grid(double beta_step, double pad_to);

struct WignerGrid {
  double angle = 0.0;  // ψ: α = e^{iψ}(x + i p)/√2
  std::vector<double> x;
  std::vector<double> p;
  Eigen::MatrixXd values;  // rows index p, columns index x; W(α)
  /// max |W| on the outer ring of the grid relative to max |W|.
  double boundary_ratio = 0.0;
  bool boundary_warning = false;

  /// ∫ W d²α = ½ ∫∫ W dx dp (trapezoid).
  double integral() const;
};

/// Edge-to-peak ratio above which the grid is flagged as too small.
inline constexpr double kWignerBoundaryTol = 1e-3;

/// W(α) = (2/π) Tr[ρ D(α) Π D†(α)], Π = (−1)^{a†a}, on the rotated grid.
WignerGrid wigner(const DensityMatrix& rho, std::span<const double> x, std::span<const double> p,
                  double angle = 0.0, int workers = 0);

/// Density of X_ψ: P(x) = ½ ∫ W dp.
MarginalCurve wigner_marginal(const WignerGrid& w);

/// ∫ |f − g| dx after linear interpolation of `b` onto the grid of `a`.
double l1_distance(const MarginalCurve& a, const MarginalCurve& b);

struct PhaseDiffusionFit {
  std::vector<double> t;
  std::vector<double> theta_sq;
  /// θ² slope through the origin, rad² per time unit of t.
  double rate = 0.0;
  /// |<a>| fell below 1e-6 √I. Points from there on are excluded from the fit.
  bool saturated = false;
  int points_used = 0;
};

/// <θ²>(t) = −2 ln(|<a>(t)| / √I), fitted with weights |<a>|²/I. Throws
/// InvalidArgument if sizes differ, I ≤ 0, or |<a>(0)|² is not within 5% of I.
PhaseDiffusionFit phase_variance_trace(std::span<const double> t, std::span<const Complex> a,
                                       double intensity);

/// Joint state |α> ⊗ |0>_h ⊗ |0>_c (heating ion in the pumped level, cooling
/// ion in its lower level).
DensityMatrix coherent_start(Complex alpha, const SpaceLayout& layout);

/// <a>(t) for evolution of `spec` from `rho0`. With the tickle off only the
/// charge sector that carries <a> is propagated.
std::vector<Complex> amplitude_trajectory(const SystemSpec& spec, const DensityMatrix& rho0,
                                          std::span<const double> t_grid, const EvolveOptions& opt = {});

}  // namespace phlaser
