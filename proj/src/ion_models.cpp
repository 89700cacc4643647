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

#include "phlaser/ion_models.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <string>

#include "phlaser/error.hpp"
#include "phlaser/ode.hpp"

namespace phlaser {

namespace {

constexpr std::array<TableRow, 8> kTable{{
    {"fig2", 4.55, 0.0, 91.0, 435.0, 0.0},
    {"fig3a", 4.65, 12.0, 96.0, 435.0, 426.0},
    {"fig3b", 4.62, 6.28, 91.0, 385.0, 429.0},
    {"fig3c", 4.65, 4.29, 96.0, 435.0, 426.0},
    {"fig3d", 4.57, 2.11, 93.0, 385.0, 50.0},
    {"fig3e", 4.63, 0.0, 93.0, 435.0, 0.0},
    {"fig4", 4.59, 4.24, 91.0, 344.0, 435.0},
    {"fig5", 4.59, 4.24, 91.0, 344.0, 435.0},
}};

void require_nonneg(double v, const char* field) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(field) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be finite and > 0");
  }
}

// X + X†, exactly Hermitian elementwise.
Operator hermitian_part_sum(const Operator& x) { return x + x.adjoint(); }

Operator heating_lowering(const SystemSpec& spec) {
  return lamb_dicke_matrix_elements(spec.eta_h, spec.layout.fock_cutoff,
                                    spec.nonlinear_ld ? LdOrder::full : LdOrder::first);
}

}  // namespace

void SystemSpec::validate() const {
  require_nonneg(g_h, "g_h");
  require_nonneg(g_c, "g_c");
  require_nonneg(gamma_h, "gamma_h");
  require_nonneg(gamma_c, "gamma_c");
  require_nonneg(gamma_e, "gamma_e");
  require_nonneg(tickle.g_t, "tickle.g_t");
  if (!std::isfinite(tickle.phase)) throw ConfigError("tickle.phase must be finite");
  if (be_levels != 2 && be_levels != 4) {
    throw ConfigError("be_levels must be 2 or 4, got " + std::to_string(be_levels));
  }
  if (layout.heating_levels != be_levels) {
    throw ConfigError("layout heating dimension does not match be_levels");
  }
  if (layout.fock_cutoff < 2) throw ConfigError("fock_cutoff must be >= 2");
  if (be_levels == 4) {
    if (gamma_e > 0.0) {
      throw ConfigError("gamma_e must be 0 with be_levels = 4 (dephasing is explicit in the 4-level model)");
    }
    require_nonneg(four_level.omega1, "four_level.omega1");
    require_nonneg(four_level.omega2, "four_level.omega2");
    require_nonneg(four_level.gamma0, "four_level.gamma0");
    require_nonneg(four_level.gamma1, "four_level.gamma1");
    require_nonneg(four_level.gamma2, "four_level.gamma2");
    if (!std::isfinite(four_level.delta1)) throw ConfigError("four_level.delta1 must be finite");
  }
  for (auto [eta, name] : {std::pair{eta_h, "eta_h"}, std::pair{eta_c, "eta_c"}}) {
    if (!(eta >= 0.0 && eta < 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1)");
  }
}

std::span<const TableRow> table_rows() { return kTable; }

const TableRow& table_row(std::string_view name) {
  for (const auto& r : kTable) {
    if (r.name == name) return r;
  }
  throw ConfigError("unknown table row '" + std::string(name) + "'");
}

SystemSpec spec_from_table(const TableRow& row, BerylliumModel model, int fock_cutoff) {
  SystemSpec s;
  s.g_h = khz_to_rad_per_ms(row.g_h_khz);
  s.g_c = khz_to_rad_per_ms(row.g_c_khz);
  s.gamma_h = kEffectiveGammaH;
  s.gamma_c = row.gamma_c;
  switch (model) {
    case BerylliumModel::two_level:
      s.be_levels = 2;
      break;
    case BerylliumModel::two_level_dephased:
      s.be_levels = 2;
      s.gamma_e = kDephasingRatio * s.gamma_h;
      break;
    case BerylliumModel::four_level: {
      s.be_levels = 4;
      auto& f = s.four_level;
      f.delta1 = kRepumper1Detuning;
      f.omega1 = omega1_from_tau1(1e3 / row.gamma_h1, f.delta1, f.gamma0, f.gamma1, f.gamma2);
      f.omega2 = omega2_from_tau2(1e3 / row.gamma_h2, f.gamma0, f.gamma1, f.gamma2);
      break;
    }
  }
  s.layout = SpaceLayout(fock_cutoff, s.be_levels, 2);
  s.validate();
  return s;
}

Operator lamb_dicke_matrix_elements(double eta, int n, LdOrder order) {
  if (!(eta >= 0.0 && eta < 1.0)) throw InvalidArgument("Lamb-Dicke parameter must lie in [0, 1)");
  if (order == LdOrder::first) return destroy(n);
  if (n < 2) throw DimensionError("Fock cutoff must be >= 2");
  const double x = eta * eta;
  const double dw = std::exp(-x / 2.0);
  std::vector<Triplet> t;
  for (int k = 0; k + 1 < n; ++k) {
    const double lag = std::assoc_laguerre(static_cast<unsigned>(k), 1u, x);
    t.emplace_back(k, k + 1, dw * lag / std::sqrt(k + 1.0));
  }
  return Operator::from_triplets(n, t);
}

Operator motional_annihilation(const SpaceLayout& layout) {
  return embed(destroy(layout.fock_cutoff), Slot::motion, layout);
}

Operator motional_number(const SpaceLayout& layout) {
  return embed(number_op(layout.fock_cutoff), Slot::motion, layout);
}

Operator qubit_sigma_z(const SpaceLayout& layout, Slot ion) {
  return embed(spin_op(SpinKind::z, layout.slot_dim(ion), 0, 1), ion, layout);
}

Operator build_hamiltonian(const SystemSpec& spec) {
  spec.validate();
  const SpaceLayout& L = spec.layout;
  const int hl = L.heating_levels;
  const Operator a = motional_annihilation(L);

  // Cooling ion, red sideband: g_c (a† σ₋ᶜ + a σ₊ᶜ).
  const Operator sp_c = embed(spin_op(SpinKind::plus, 2, 0, 1), Slot::cooling, L);
  Operator x = spec.g_c * (a * sp_c);

  // Heating ion, blue sideband: g_h (a† σ₊ʰ + a σ₋ʰ).
  const Operator f = embed(heating_lowering(spec), Slot::motion, L);
  const Operator sm_h = embed(spin_op(SpinKind::minus, hl, 0, 1), Slot::heating, L);
  x = x + spec.g_h * (f * sm_h);

  if (spec.tickle.enabled && spec.tickle.g_t > 0.0) {
    x = x + (spec.tickle.g_t * std::exp(kI * spec.tickle.phase)) * a;
  }

  if (hl == 4) {
    // Frame in which both repumper fields are static. Repumper 2 is resonant
    // with |2> <-> |e> and repumper 1 is red detuned by Δ₁, so |e> and |2>
    // both sit at +Δ₁ relative to |1> (a Raman detuning that prevents a
    // |1>/|2> dark state). Rabi couplings enter as Ω/2.
    const auto& p = spec.four_level;
    const double to_ms = 1e3;
    x = x + (0.5 * p.omega1 * to_ms) * embed(transition(4, kExcited, kQubitUpper), Slot::heating, L);
    x = x + (0.5 * p.omega2 * to_ms) * embed(transition(4, kExcited, kAux), Slot::heating, L);
    Operator h = hermitian_part_sum(x);
    if (p.delta1 != 0.0) {
      const Operator levels = transition(4, kExcited, kExcited) + transition(4, kAux, kAux);
      h = h + Complex(p.delta1 * to_ms) * embed(levels, Slot::heating, L);
    }
    if (p.compensate_light_shift) {
      const double shift = repumper_light_shift(p);
      if (shift != 0.0) {
        h = h - Complex(shift * to_ms) * embed(transition(4, kQubitUpper, kQubitUpper), Slot::heating, L);
      }
    }
    return h;
  }
  return hermitian_part_sum(x);
}

std::vector<Operator> build_jump_ops(const SystemSpec& spec) {
  spec.validate();
  const SpaceLayout& L = spec.layout;
  std::vector<Operator> jumps;
  auto add = [&](double rate, const Operator& op, Slot slot) {
    if (rate > 0.0) jumps.push_back(std::sqrt(rate) * embed(op, slot, L));
  };
  if (spec.be_levels == 2) {
    add(spec.gamma_h, spin_op(SpinKind::minus, 2, 0, 1), Slot::heating);
    add(spec.gamma_e, spin_op(SpinKind::proj_upper, 2, 0, 1), Slot::heating);
  } else {
    const auto& p = spec.four_level;
    add(p.gamma0 * 1e3, transition(4, kBright, kExcited), Slot::heating);
    add(p.gamma1 * 1e3, transition(4, kQubitUpper, kExcited), Slot::heating);
    add(p.gamma2 * 1e3, transition(4, kAux, kExcited), Slot::heating);
  }
  add(spec.gamma_c, spin_op(SpinKind::minus, 2, 0, 1), Slot::cooling);
  return jumps;
}

std::vector<int> excitation_charges(const SpaceLayout& layout) {
  std::vector<int> q(static_cast<size_t>(layout.joint_dim()));
  for (int k = 0; k < layout.joint_dim(); ++k) {
    const auto [n, h, c] = layout.unpack(k);
    q[static_cast<size_t>(k)] = 2 * n + (h == kBright ? 1 : -1) + (c == 1 ? 1 : -1);
  }
  return q;
}

RateParams RateParams::from_four_level(const FourLevelParams& p) {
  RateParams r;
  r.gamma0 = p.gamma0;
  r.gamma1 = p.gamma1;
  r.gamma2 = p.gamma2;
  r.delta = p.delta1;
  r.omega1 = p.omega1;
  r.omega2 = p.omega2;
  r.b1 = repumper_excitation_rate(p.omega1, p.delta1, p.gamma());
  r.b2 = repumper_excitation_rate(p.omega2, 0.0, p.gamma());
  r.tau1 = p.omega1 > 0.0 ? tau1_from_omega1(p.omega1, p.delta1, p.gamma0, p.gamma1, p.gamma2) : 0.0;
  r.tau2 = p.omega2 > 0.0 ? tau2_from_omega2(p.omega2, p.gamma0, p.gamma1, p.gamma2) : 0.0;
  return r;
}

std::vector<Populations> rate_equation_evolve(const Populations& p0, const RateParams& params,
                                              std::span<const double> t_grid) {
  double total = 0.0;
  for (double v : p0) {
    if (!(v >= 0.0)) throw InvalidArgument("populations must be >= 0");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("populations must sum to 1");
  for (double v : {params.b1, params.b2, params.gamma0, params.gamma1, params.gamma2}) {
    if (!(v >= 0.0)) throw InvalidArgument("rates must be >= 0");
  }
  const double g = params.gamma();
  auto rhs = [&](double, const Eigen::Vector4d& p, Eigen::Vector4d& dp) {
    dp[0] = params.gamma0 * p[3];
    dp[1] = -params.b1 * p[1] + params.gamma1 * p[3];
    dp[2] = -params.b2 * p[2] + params.gamma2 * p[3];
    dp[3] = params.b1 * p[1] + params.b2 * p[2] - g * p[3];
  };
  std::vector<Populations> out;
  out.reserve(t_grid.size());
  ode::Options opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-14;
  const Eigen::Vector4d y0(p0[0], p0[1], p0[2], p0[3]);
  ode::dopri5(rhs, t_grid.empty() ? 0.0 : t_grid.front(), y0, t_grid,
              [&](int, double, const Eigen::Vector4d& y) {
                out.push_back({y[0], y[1], y[2], y[3]});
                return true;
              },
              opt);
  return out;
}

double repumper_light_shift(const FourLevelParams& p) {
  const double g = p.gamma();
  return -p.omega1 * p.omega1 * p.delta1 / (g * g + 4.0 * p.delta1 * p.delta1);
}

double repumper_excitation_rate(double omega, double delta, double gamma) {
  const double den = gamma * gamma + 4.0 * delta * delta;
  if (den <= 0.0) throw InvalidArgument("repumper_excitation_rate: zero denominator");
  return gamma * omega * omega / den;
}

double omega1_from_tau1(double tau1, double delta, double gamma0, double gamma1, double gamma2) {
  require_positive(tau1, "tau1");
  const double g = gamma0 + gamma1 + gamma2;
  const double branch = gamma0 + gamma2;
  if (branch <= 0.0) throw InvalidArgument("omega1_from_tau1: gamma0 + gamma2 must be > 0");
  return std::sqrt((1.0 / tau1) * (g * g + 4.0 * delta * delta) / branch);
}

double omega2_from_tau2(double tau2, double gamma0, double gamma1, double gamma2) {
  require_positive(tau2, "tau2");
  const double g = gamma0 + gamma1 + gamma2;
  const double branch = gamma0 + gamma1;
  if (branch <= 0.0) throw InvalidArgument("omega2_from_tau2: gamma0 + gamma1 must be > 0");
  return std::sqrt((1.0 / tau2) * g * g / branch);
}

double tau1_from_omega1(double omega1, double delta, double gamma0, double gamma1, double gamma2) {
  const double g = gamma0 + gamma1 + gamma2;
  const double b = repumper_excitation_rate(omega1, delta, g);
  const double inv = b * (gamma0 + gamma2) / g;
  if (inv <= 0.0) throw InvalidArgument("tau1_from_omega1: vanishing repump rate");
  return 1.0 / inv;
}

double tau2_from_omega2(double omega2, double gamma0, double gamma1, double gamma2) {
  const double g = gamma0 + gamma1 + gamma2;
  const double b = repumper_excitation_rate(omega2, 0.0, g);
  const double inv = b * (gamma0 + gamma1) / g;
  if (inv <= 0.0) throw InvalidArgument("tau2_from_omega2: vanishing repump rate");
  return 1.0 / inv;
}

DecayFit effective_gamma_h(const FourLevelParams& p) {
  const RateParams r = RateParams::from_four_level(p);
  if (r.b1 == 0.0) return DecayFit{0.0, 0.0, true};

  // Window: long enough for the slowest channel to finish (several 1/b).
  const double slow = std::min(r.b1, r.b2 > 0.0 ? r.b2 : r.b1);
  const double t_max = std::min(20.0 / slow + 50.0 / r.gamma(), 1e6);
  constexpr int kSamples = 400;
  std::vector<double> t(kSamples);
  for (int i = 0; i < kSamples; ++i) t[i] = t_max * i / (kSamples - 1);
  const auto traj = rate_equation_evolve({0.0, 1.0, 0.0, 0.0}, r, t);

  auto cost = [&](double log_rate) {
    const double k = std::exp(log_rate);
    double s = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double d = (1.0 - traj[i][0]) - std::exp(-k * t[i]);
      s += d * d;
    }
    return s;
  };
  const double lo = std::log(1e-6 / t_max);
  const double hi = std::log(10.0 * r.gamma());
  boost::uintmax_t iters = 200;
  const auto [best, c] = boost::math::tools::brent_find_minima(cost, lo, hi, 50, iters);

  DecayFit fit;
  fit.rate_per_ms = std::exp(best) * 1e3;
  fit.rms_residual = std::sqrt(c / kSamples);
  // Converged when the transient actually completed and the optimiser did not
  // stop on an interval edge or the iteration cap.
  const bool edge = (best - lo) < 1e-6 || (hi - best) < 1e-6;
  fit.converged = iters < 200 && !edge && traj.back()[0] > 0.99;
  return fit;
}

std::vector<double> carrier_signal(std::span<const double> pn, double omega0, double eta,
                                   std::span<const double> t_grid) {
  double total = 0.0;
  for (double v : pn) {
    if (!(v >= -1e-12)) throw InvalidArgument("carrier_signal: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6) throw InvalidArgument("carrier_signal: distribution not normalized");
  if (!(eta >= 0.0 && eta < 1.0)) throw InvalidArgument("Lamb-Dicke parameter must lie in [0, 1)");
  const double x = eta * eta;
  std::vector<double> rabi(pn.size());
  for (size_t n = 0; n < pn.size(); ++n) {
    rabi[n] = omega0 * std::exp(-x / 2.0) * std::laguerre(static_cast<unsigned>(n), x);
  }
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    double s = 0.0;
    for (size_t n = 0; n < pn.size(); ++n) {
      const double v = std::sin(0.5 * rabi[n] * t);
      s += pn[n] * v * v;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace phlaser
