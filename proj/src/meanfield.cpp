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

#include "phlaser/meanfield.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phlaser/error.hpp"

namespace phlaser {

void MfParams::validate() const {
  auto check = [](double v, const char* name, bool strictly_positive) {
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v == 0.0)) {
      throw InvalidArgument(std::string("mean-field parameter '") + name + "' out of range");
    }
  };
  check(g_h, "g_h", false);
  check(g_c, "g_c", false);
  check(gamma_h, "gamma_h", true);
  check(gamma_c, "gamma_c", true);
  check(gamma_e, "gamma_e", false);
}

MfParams MfParams::from_spec(const SystemSpec& spec) {
  MfParams p;
  p.g_h = spec.g_h;
  p.g_c = spec.g_c;
  p.gamma_c = spec.gamma_c;
  if (spec.be_levels == 4) {
    p.gamma_h = kEffectiveGammaH;
    p.gamma_e = kDephasingRatio * kEffectiveGammaH;
  } else {
    p.gamma_h = spec.gamma_h;
    p.gamma_e = spec.gamma_e;
  }
  p.validate();
  return p;
}

MeanFieldState cumulant_rhs(const MeanFieldState& s, const MfParams& p) {
  const Complex i(0.0, 1.0);
  MeanFieldState d;
  d.A = -i * p.g_c * std::conj(s.S_c) - i * p.g_h * s.S_h;
  d.S_c = -0.5 * p.gamma_c * s.S_c - i * p.g_c * std::conj(s.A) * s.D_c;
  d.D_c = (2.0 * i * p.g_c * (std::conj(s.A) * std::conj(s.S_c) - s.A * s.S_c)).real() -
          p.gamma_c * (s.D_c + 1.0);
  d.S_h = -0.5 * (p.gamma_h + p.gamma_e) * s.S_h - i * p.g_h * s.A * s.D_h;
  d.D_h = (2.0 * i * p.g_h * (s.A * std::conj(s.S_h) - std::conj(s.A) * s.S_h)).real() -
          p.gamma_h * (s.D_h + 1.0);
  return d;
}

MeanFieldState slaved_state(Complex a, const MfParams& p) {
  p.validate();
  const Complex i(0.0, 1.0);
  const double n = std::norm(a);
  MeanFieldState s;
  s.A = a;
  s.D_c = -1.0 / (1.0 + p.s_c() * n);
  s.D_h = -1.0 / (1.0 + p.s_h() * n);
  s.S_c = -2.0 * i * p.g_c * std::conj(a) * s.D_c / p.gamma_c;
  s.S_h = -2.0 * i * p.g_h * a * s.D_h / (p.gamma_h + p.gamma_e);
  return s;
}

Complex adiabatic_rhs_A(Complex a, const MfParams& p) {
  const double n = std::norm(a);
  return a * (2.0 * p.kappa_h() / (1.0 + p.s_h() * n) - 2.0 * p.kappa_c() / (1.0 + p.s_c() * n));
}

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::dark: return "dark";
    case Phase::lasing: return "lasing";
    case Phase::heating: return "heating";
    case Phase::runaway_corner: return "runaway_corner";
    case Phase::boundary: return "boundary";
  }
  return "unknown";
}

Phase phase_from_name(std::string_view name) {
  for (Phase p : {Phase::dark, Phase::lasing, Phase::heating, Phase::runaway_corner, Phase::boundary}) {
    if (phase_name(p) == name) return p;
  }
  throw InvalidArgument("unknown phase label '" + std::string(name) + "'");
}

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kBoundaryRelTol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

Phase classify_phase(const MfParams& p) {
  p.validate();
  const double kh = p.kappa_h(), kc = p.kappa_c();
  if (near(kh, kc) || near(p.gamma_h, p.gamma_c)) return Phase::boundary;
  const bool gain = kh > kc;
  const bool heating_saturates_first = p.gamma_h < p.gamma_c;
  if (heating_saturates_first) return gain ? Phase::lasing : Phase::dark;
  return gain ? Phase::heating : Phase::runaway_corner;
}

SteadyN steady_n(const MfParams& p) {
  p.validate();
  if (p.gamma_c == p.gamma_h) throw InvalidArgument("steady_n: gamma_c == gamma_h, singular denominator");
  SteadyN r;
  r.phase = classify_phase(p);
  const bool finite_branch = p.gamma_h < p.gamma_c;
  if (!finite_branch) {
    r.nbar = std::numeric_limits<double>::infinity();
    return r;
  }
  if (r.phase == Phase::dark) return r;
  // Lasing, or κ_h = κ_c on the finite branch (numerator vanishes).
  const double gh2 = p.g_h * p.g_h, gc2 = p.g_c * p.g_c;
  const double num = p.gamma_c * p.gamma_h * (p.gamma_c * gh2 - (p.gamma_h + p.gamma_e) * gc2);
  const double den = 8.0 * gc2 * gh2 * (p.gamma_c - p.gamma_h);
  r.nbar = std::max(0.0, num / den);
  return r;
}

MfTrajectory integrate_meanfield(const MeanFieldState& s0, const MfParams& p,
                                 std::span<const double> t_grid, const ode::Options& opt) {
  p.validate();
  using Vec = Eigen::VectorXcd;
  auto pack = [](const MeanFieldState& s) {
    Vec y(5);
    y << s.A, s.S_c, s.S_h, s.D_c, s.D_h;
    return y;
  };
  auto unpack = [](const Vec& y) {
    MeanFieldState s;
    s.A = y[0];
    s.S_c = y[1];
    s.S_h = y[2];
    s.D_c = y[3].real();
    s.D_h = y[4].real();
    return s;
  };
  MfTrajectory traj;
  auto rhs = [&](double, const Vec& y, Vec& dy) { dy = pack(cumulant_rhs(unpack(y), p)); };
  auto observe = [&](int, double t, const Vec& y) {
    const MeanFieldState s = unpack(y);
    traj.t.push_back(t);
    traj.states.push_back(s);
    const double tol = 1e-6;
    if (std::abs(s.D_c) > 1.0 + tol || std::abs(s.D_h) > 1.0 + tol || std::abs(s.S_c) > 0.5 + tol ||
        std::abs(s.S_h) > 0.5 + tol) {
      ++traj.monitor_violations;
    }
    if (std::norm(s.A) > kRunawayIntensity) {
      traj.heating = true;
      return false;
    }
    return true;
  };
  const double t0 = t_grid.empty() ? 0.0 : std::min(0.0, t_grid.front());
  ode::dopri5(rhs, t0, pack(s0), t_grid, observe, opt);
  return traj;
}

std::vector<double> integrate_adiabatic_amplitude(double a0, const MfParams& p,
                                                  std::span<const double> t_grid) {
  p.validate();
  using Vec = Eigen::VectorXd;
  Vec y(1);
  y[0] = a0 * a0;
  // İ = 2 I (2κ_h/(1+s_h I) − 2κ_c/(1+s_c I)).
  auto rhs = [&](double, const Vec& v, Vec& dv) {
    dv.resize(1);
    dv[0] = 2.0 * adiabatic_rhs_A(std::sqrt(std::max(v[0], 0.0)), p).real() * std::sqrt(std::max(v[0], 0.0));
  };
  std::vector<double> out;
  const double t0 = t_grid.empty() ? 0.0 : std::min(0.0, t_grid.front());
  ode::dopri5(rhs, t0, y, t_grid, [&](int, double, const Vec& v) {
    out.push_back(std::sqrt(std::max(v[0], 0.0)));
    return v[0] <= kRunawayIntensity;
  }, {1e-10, 1e-12});
  return out;
}

double hl_phase_diffusion(double g, double gamma, double gamma_e, double intensity) {
  if (!(intensity > 0.0)) throw InvalidArgument("hl_phase_diffusion: intensity must be positive");
  if (!(gamma > 0.0) || gamma_e < 0.0) throw InvalidArgument("hl_phase_diffusion: invalid rates");
  const double ge = gamma + gamma_e;
  const double g2 = g * g;
  const double num = 2.0 * g2 / ge + 8.0 * g2 * g2 * intensity / (gamma * ge * ge);
  const double den = intensity * (1.0 + 8.0 * g2 * intensity / (gamma * ge));
  return num / den;
}

HlDiffusion hl_phase_diffusion_total(const MfParams& p, double intensity) {
  p.validate();
  HlDiffusion d;
  d.heating_ion = hl_phase_diffusion(p.g_h, p.gamma_h, p.gamma_e, intensity);
  d.cooling_ion = hl_phase_diffusion(p.g_c, p.gamma_c, 0.0, intensity);
  d.total = d.heating_ion + d.cooling_ion;
  return d;
}

}  // namespace phlaser
