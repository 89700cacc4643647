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

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phlaser/operator_core.hpp"

namespace phlaser {

// Units: couplings and rates of the motional/qubit model are rad/ms and 1/ms.
// Atomic-physics quantities of the beryllium repumping scheme (Ω₁, Ω₂, Δ₁,
// γ₀..γ₂) stay in rad/µs and 1/µs and are converted when matrices are built.

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// g/2π in kHz -> g in rad/ms.
inline constexpr double khz_to_rad_per_ms(double khz) { return kTwoPi * khz; }
inline constexpr double rad_per_ms_to_khz(double g) { return g / kTwoPi; }

/// Heating-ion level indices. Levels 2 and 3 exist only in the 4-level model.
enum HeatingLevel : int { kBright = 0, kQubitUpper = 1, kAux = 2, kExcited = 3 };

struct FourLevelParams {
  double omega1 = 0.0;  // rad/µs, repumper |1> <-> |e>
  double omega2 = 0.0;  // rad/µs, repumper |2> <-> |e>
  double delta1 = 0.0;  // rad/µs, red detuning of repumper 1
  double gamma0 = 40.0;  // 1/µs, |e> -> |0>
  double gamma1 = 50.4;  // 1/µs, |e> -> |1>
  double gamma2 = 29.6;  // 1/µs, |e> -> |2>
  /// Tune the blue-sideband drive to the |1> level as shifted by repumper 1
  /// (adds −δ_LS|1><1| to undo the shift, see repumper_light_shift).
  bool compensate_light_shift = true;

  double gamma() const { return gamma0 + gamma1 + gamma2; }
  friend bool operator==(const FourLevelParams&, const FourLevelParams&) = default;
};

struct TickleParams {
  double g_t = 0.0;    // rad/ms
  double phase = 0.0;  // rad
  bool enabled = false;
  friend bool operator==(const TickleParams&, const TickleParams&) = default;
};

/// Full physical parameter set of one run.
struct SystemSpec {
  double g_h = 0.0;      // rad/ms
  double g_c = 0.0;      // rad/ms
  double gamma_h = 0.0;  // 1/ms, effective two-level rate
  double gamma_c = 0.0;  // 1/ms
  double gamma_e = 0.0;  // 1/ms, |1><1| dephasing of the heating ion (2-level only)
  int be_levels = 2;
  FourLevelParams four_level;
  TickleParams tickle;
  double eta_h = 0.15;
  double eta_c = 0.05;
  /// Finite Lamb-Dicke sideband elements for the heating ion. The cooling ion
  /// always uses the first-order (linear in a) coupling.
  bool nonlinear_ld = false;
  SpaceLayout layout{40, 2, 2};
  double omega_m = 0.0;  // rad/ms, bookkeeping only

  /// Throws ConfigError naming the offending field.
  void validate() const;
  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

enum class BerylliumModel { two_level, two_level_dephased, four_level };

/// One row of the experimental parameter table (kHz and 1/ms as printed).
struct TableRow {
  std::string_view name;
  double g_h_khz;
  double g_c_khz;  // 0 where the table has no entry
  double gamma_h1;  // 1/ms, = 1/τ₁
  double gamma_h2;  // 1/ms, = 1/τ₂
  double gamma_c;   // 1/ms, 0 where the table has no entry
};

std::span<const TableRow> table_rows();
const TableRow& table_row(std::string_view name);

/// Effective beryllium decay 1/γ_h = 15.5 µs, in 1/ms.
inline constexpr double kEffectiveGammaH = 1e3 / 15.5;
/// γ_e = f γ_h with f = 50/40.
inline constexpr double kDephasingRatio = 50.0 / 40.0;
/// Repumper-1 detuning 2π × 10 MHz in rad/µs.
inline constexpr double kRepumper1Detuning = kTwoPi * 10.0;

/// SystemSpec for a table row in the requested beryllium model.
SystemSpec spec_from_table(const TableRow& row, BerylliumModel model, int fock_cutoff);

// --- model construction ---------------------------------------------------

Operator build_hamiltonian(const SystemSpec& spec);
std::vector<Operator> build_jump_ops(const SystemSpec& spec);

/// Doubled excitation charge q = 2n − s_h + s_c per joint basis state, where
/// s = ±1 for the upper/lower qubit level (all heating levels other than |0>
/// count as "upper"). The sideband Hamiltonians conserve q, every jump shifts
/// it by a fixed amount, and only the tickle drive breaks it.
std::vector<int> excitation_charges(const SpaceLayout& layout);

enum class LdOrder { first, full };

/// Motional lowering operator of a sideband transition. `first` is plain a;
/// `full` has <n|f|n+1> = e^{−η²/2} L_n^1(η²) / √(n+1), which reduces to
/// √(n+1) at η = 0.
Operator lamb_dicke_matrix_elements(double eta, int n, LdOrder order);

// Observables on the joint space.
Operator motional_annihilation(const SpaceLayout& layout);
Operator motional_number(const SpaceLayout& layout);
/// σ_z on the |0>,|1> qubit of the given ion.
Operator qubit_sigma_z(const SpaceLayout& layout, Slot ion);

// --- engineered decay (rate equations, µs units) --------------------------

struct RateParams {
  double b1 = 0.0;  // 1/µs, excitation rate out of |1> (repumper 1)
  double b2 = 0.0;  // 1/µs, excitation rate out of |2> (repumper 2)
  double gamma0 = 40.0, gamma1 = 50.4, gamma2 = 29.6;  // 1/µs
  double delta = 0.0;  // rad/µs
  double tau1 = 0.0, tau2 = 0.0;  // µs (0: repumper off)
  double omega1 = 0.0, omega2 = 0.0;  // rad/µs

  double gamma() const { return gamma0 + gamma1 + gamma2; }
  static RateParams from_four_level(const FourLevelParams& p);
};

using Populations = std::array<double, 4>;  // P0, P1, P2, Pe

/// Integrates P0' = γ₀Pe, P1' = −b₁P1 + γ₁Pe, P2' = −b₂P2 + γ₂Pe,
/// Pe' = b₁P1 + b₂P2 − γPe on `t_grid` (µs).
std::vector<Populations> rate_equation_evolve(const Populations& p0, const RateParams& params,
                                              std::span<const double> t_grid);

/// AC Stark shift of |1> caused by repumper 1, −Ω₁²Δ₁/(γ² + 4Δ₁²), in rad/µs.
double repumper_light_shift(const FourLevelParams& p);

/// b = γΩ²/(γ² + 4Δ²).
double repumper_excitation_rate(double omega, double delta, double gamma);

double omega1_from_tau1(double tau1, double delta, double gamma0, double gamma1, double gamma2);
double omega2_from_tau2(double tau2, double gamma0, double gamma1, double gamma2);
double tau1_from_omega1(double omega1, double delta, double gamma0, double gamma1, double gamma2);
double tau2_from_omega2(double omega2, double gamma0, double gamma1, double gamma2);

struct DecayFit {
  double rate_per_ms = 0.0;
  double rms_residual = 0.0;
  bool converged = false;
};

/// Single-exponential fit of the |1> -> |0> repumping transient with both
/// repumpers on.
DecayFit effective_gamma_h(const FourLevelParams& p);

/// Carrier Rabi signal P_up(t) = Σ p_n sin²(Ω₀ e^{−η²/2} L_n(η²) t / 2).
std::vector<double> carrier_signal(std::span<const double> pn, double omega0, double eta,
                                   std::span<const double> t_grid);

}  // namespace phlaser
