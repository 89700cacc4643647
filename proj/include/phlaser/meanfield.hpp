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
#include <string_view>
#include <vector>

#include "phlaser/ion_models.hpp"
#include "phlaser/ode.hpp"
#include "phlaser/operator_core.hpp"

namespace phlaser {

/// Couplings (rad/ms) and rates (1/ms) of the two-level mean-field model.
/// Derived coefficients are computed on demand.
struct MfParams {
  double g_h = 0.0;
  double g_c = 0.0;
  double gamma_h = 0.0;
  double gamma_c = 0.0;
  double gamma_e = 0.0;

  double kappa_h() const { return g_h * g_h / (gamma_h + gamma_e); }
  double kappa_c() const { return g_c * g_c / gamma_c; }
  double s_h() const { return 8.0 * g_h * g_h / (gamma_h * (gamma_h + gamma_e)); }
  double s_c() const { return 8.0 * g_c * g_c / (gamma_c * gamma_c); }

  /// Throws InvalidArgument for negative couplings or non-positive γ_h, γ_c.
  void validate() const;

  /// Two-level reduction of a SystemSpec. A 4-level spec maps to the
  /// effective rate γ_h = 1/15.5 µs⁻¹ with γ_e = (50/40) γ_h.
  static MfParams from_spec(const SystemSpec& spec);
};

struct MeanFieldState {
  Complex A{0.0};
  Complex S_c{0.0};
  Complex S_h{0.0};
  double D_c = -1.0;
  double D_h = -1.0;
};

/// Time derivative of the first-order cumulant equations.
MeanFieldState cumulant_rhs(const MeanFieldState& s, const MfParams& p);

/// Spin variables at their adiabatic values for a frozen amplitude `a`.
/// Starting the cumulant equations here skips the initial slip of ~1/γ.
MeanFieldState slaved_state(Complex a, const MfParams& p);

/// Ȧ = A (2κ_h / (1 + s_h|A|²) − 2κ_c / (1 + s_c|A|²)).
Complex adiabatic_rhs_A(Complex a, const MfParams& p);

enum class Phase { dark, lasing, heating, runaway_corner, boundary };

std::string_view phase_name(Phase p);
Phase phase_from_name(std::string_view name);

/// Relative tolerance for flagging κ_h = κ_c or γ_h = γ_c.
inline constexpr double kBoundaryRelTol = 1e-9;

Phase classify_phase(const MfParams& p);

struct SteadyN {
  Phase phase = Phase::dark;
  /// 0 in the dark phase, +inf where no finite steady state exists.
  double nbar = 0.0;
};

/// Closed-form ⟨n⟩ above threshold. Throws InvalidArgument when γ_c = γ_h
/// exactly (singular denominator).
SteadyN steady_n(const MfParams& p);

struct MfTrajectory {
  std::vector<double> t;
  std::vector<MeanFieldState> states;
  /// Integration stopped because |A|² exceeded kRunawayIntensity.
  bool heating = false;
  /// Number of samples where |D| > 1 + 1e-6 or |S| > 1/2 + 1e-6.
  int monitor_violations = 0;
};

inline constexpr double kRunawayIntensity = 1e3;

MfTrajectory integrate_meanfield(const MeanFieldState& s0, const MfParams& p,
                                 std::span<const double> t_grid, const ode::Options& opt = {});

/// |A(t)| from the adiabatic equation, integrated in the intensity I = |A|².
std::vector<double> integrate_adiabatic_amplitude(double a0, const MfParams& p,
                                                  std::span<const double> t_grid);

/// Heisenberg-Langevin phase diffusion 2D_ΘΘ (rad²/ms) of one spin coupled
/// to the oscillator at intensity I:
/// (2g²/(γ+γ_e) + 8g⁴I/(γ(γ+γ_e)²)) / (I (1 + 8g²I/(γ(γ+γ_e)))).
double hl_phase_diffusion(double g, double gamma, double gamma_e, double intensity);

struct HlDiffusion {
  double heating_ion = 0.0;  // γ_e-modified, g_h, γ_h
  double cooling_ion = 0.0;  // unmodified, g_c, γ_c
  double total = 0.0;
};

HlDiffusion hl_phase_diffusion_total(const MfParams& p, double intensity);

}  // namespace phlaser
