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


#include "phlaser/tasks.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "phlaser/error.hpp"
#include "phlaser/meanfield.hpp"
#include "phlaser/phase_space.hpp"
#include "phlaser/sweep.hpp"

namespace phlaser {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

bool tickled(const SystemSpec& s) { return s.tickle.enabled && s.tickle.g_t > 0.0; }

Json mean_field_block(const SystemSpec& spec) {
  MfParams p;
  try {
    p = MfParams::from_spec(spec);
    p.validate();
  } catch (const InvalidArgument&) {
    return nullptr;
  }
  Json j{{"phase", phase_name(classify_phase(p))},
         {"kappa_h", p.kappa_h()},
         {"kappa_c", p.kappa_c()},
         {"s_h", p.s_h()},
         {"s_c", p.s_c()}};
  try {
    j["nbar"] = number_to_json(steady_n(p).nbar);
  } catch (const InvalidArgument&) {
    j["nbar"] = nullptr;
  }
  return j;
}

DensityMatrix solve(const RunConfig& cfg, SteadyStateReport* rep) {
  return steady_state(cfg.system, SteadyStateOptions{.residual_tol = cfg.solver.residual_tol}, rep);
}

}  // namespace

double heating_sigma_z(const DensityMatrix& rho, const SpaceLayout& layout) {
  return expectation(rho, qubit_sigma_z(layout, Slot::heating)).real();
}

std::vector<PopulationSample> population_trajectory(const SystemSpec& spec, const DensityMatrix& rho0,
                                                    std::span<const double> t_grid, const EvolveOptions& opt) {
  spec.validate();
  const SpaceLayout& layout = spec.layout;
  if (rho0.dim() != layout.joint_dim()) throw DimensionError("population_trajectory: state dimension mismatch");
  const Operator h = build_hamiltonian(spec);
  const std::vector<Operator> jumps = build_jump_ops(spec);
  const LiouvilleBasis basis = tickled(spec) ? LiouvilleBasis::full(layout.joint_dim())
                                             : LiouvilleBasis::sector(excitation_charges(layout), 0);
  const Superoperator l = liouvillian(h, jumps, basis);
  const Eigen::VectorXd sz = qubit_sigma_z(layout, Slot::heating).dense().diagonal().real();
  const int s = layout.heating_levels * layout.cooling_levels;

  std::vector<PopulationSample> out;
  out.reserve(t_grid.size());
  evolve_vector(l, basis.vectorize(rho0.matrix()), t_grid,
                [&](int, double t, const DenseVec& v) {
                  PopulationSample ps;
                  ps.t_ms = t;
                  ps.pn.p.assign(layout.fock_cutoff, 0.0);
                  for (int i = 0; i < layout.joint_dim(); ++i) {
                    const double d = v[basis.index(i, i)].real();
                    ps.pn.p[i / s] += d;
                    ps.sz_h += sz[i] * d;
                  }
                  for (int n = 0; n < layout.fock_cutoff; ++n) ps.pn.mean += n * ps.pn.p[n];
                  ps.pn.tail_mass = ps.pn.p.back();
                  ps.pn.truncation_warning = ps.pn.tail_mass > kTailMassWarning;
                  out.push_back(std::move(ps));
                  return true;
                },
                opt);
  return out;
}

DensityMatrix initial_state(const RunConfig& cfg) {
  const Complex alpha = cfg.evolve.initial == "coherent" ? Complex(cfg.evolve.alpha_re, cfg.evolve.alpha_im) : 0.0;
  return coherent_start(alpha, cfg.system.layout);
}

Json steady_export(const RunConfig& cfg) {
  SteadyStateReport rep;
  const DensityMatrix rho = solve(cfg, &rep);
  const auto& layout = cfg.system.layout;
  const PhononDistribution pn = phonon_distribution(rho, layout);
  const Complex a = expectation(rho, motional_annihilation(layout));
  Json j = export_header("steady", cfg.system);
  j["nbar"] = pn.mean;
  j["sz_h"] = heating_sigma_z(rho, layout);
  j["a"] = {{"re", a.real()}, {"im", a.imag()}};
  j["residual"] = rep.residual;
  j["min_eigenvalue"] = rep.min_eigenvalue;
  j["krylov_iterations"] = rep.krylov_iterations;
  j["phonon_distribution"] = distribution_to_json(pn);
  j["mean_field"] = mean_field_block(cfg.system);
  return j;
}

Json evolve_export(const RunConfig& cfg) {
  const auto t = linspace(0.0, cfg.evolve.t_end_ms, cfg.evolve.samples);
  const DensityMatrix rho0 = initial_state(cfg);
  const EvolveOptions opt = cfg.solver.evolve_options();
  const auto pops = population_trajectory(cfg.system, rho0, t, opt);
  std::vector<Complex> a(t.size(), 0.0);
  if (cfg.evolve.initial == "coherent" || tickled(cfg.system)) a = amplitude_trajectory(cfg.system, rho0, t, opt);

  std::vector<double> nbar, sz, tail, re, im;
  Json snapshots = Json::array();
  for (size_t i = 0; i < pops.size(); ++i) {
    nbar.push_back(pops[i].pn.mean);
    sz.push_back(pops[i].sz_h);
    tail.push_back(pops[i].pn.tail_mass);
    re.push_back(a[i].real());
    im.push_back(a[i].imag());
    snapshots.push_back({{"t_ms", pops[i].t_ms}, {"phonon_distribution", distribution_to_json(pops[i].pn)}});
  }
  Json j = export_header("evolve", cfg.system);
  j["initial"] = {{"state", cfg.evolve.initial}, {"alpha_re", cfg.evolve.alpha_re}, {"alpha_im", cfg.evolve.alpha_im}};
  j["t_ms"] = t;
  j["nbar"] = nbar;
  j["sz_h"] = sz;
  j["tail_mass"] = tail;
  j["a_re"] = re;
  j["a_im"] = im;
  j["snapshots"] = std::move(snapshots);
  return j;
}

Json charfun_export(const RunConfig& cfg) {
  const DensityMatrix rho = solve(cfg, nullptr);
  const auto& layout = cfg.system.layout;
  const auto& c = cfg.charfun;
  const auto grid = symmetric_grid(c.beta_max, c.beta_step);
  Json samples = Json::array(), marginals = Json::array(), wigners = Json::array();
  std::optional<DensityMatrix> motion;
  if (c.wigner) motion = DensityMatrix::repaired(motional_state(rho, layout));
  for (double deg : c.axes_deg) {
    const double phi = deg * std::numbers::pi / 180.0;
    const CharFunSamples cs = char_fun(rho, layout, phi, grid, cfg.workers);
    samples.push_back(charfun_to_json(cs));
    marginals.push_back(marginal_to_json(marginal_from_charfun(cs, c.pad_to), "charfun"));
    if (motion) {
      const auto xs = symmetric_grid(c.wigner_half_width, c.wigner_step);
      const WignerGrid w = wigner(*motion, xs, xs, cs.quadrature_angle(), cfg.workers);
      marginals.push_back(marginal_to_json(wigner_marginal(w), "wigner"));
      wigners.push_back(wigner_to_json(w));
    }
  }
  Json j = export_header("charfun", cfg.system);
  j["charfun"] = std::move(samples);
  j["marginals"] = std::move(marginals);
  if (c.wigner) j["wigner"] = std::move(wigners);
  return j;
}

Json diffusion_export(const RunConfig& cfg) {
  const double intensity = cfg.diffusion.intensity;
  const auto t = linspace(0.0, cfg.diffusion.t_end_ms, cfg.diffusion.samples);
  const DensityMatrix rho0 = coherent_start(std::sqrt(intensity), cfg.system.layout);
  const auto a = amplitude_trajectory(cfg.system, rho0, t, cfg.solver.evolve_options());
  const PhaseDiffusionFit fit = phase_variance_trace(t, a, intensity);
  std::vector<double> re, im;
  for (auto v : a) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  Json j = export_header("diffusion", cfg.system);
  j["intensity"] = intensity;
  j.update(diffusion_to_json(fit));
  j["a_re"] = re;
  j["a_im"] = im;
  try {
    const HlDiffusion hl = hl_phase_diffusion_total(MfParams::from_spec(cfg.system), intensity);
    j["hl_rate_rad2_per_ms"] = {{"heating_ion", hl.heating_ion}, {"cooling_ion", hl.cooling_ion}, {"total", hl.total}};
  } catch (const InvalidArgument&) {
    j["hl_rate_rad2_per_ms"] = nullptr;
  }
  return j;
}

Json calibrate_export(const RunConfig& cfg) {
  const FourLevelParams& p = cfg.system.four_level;
  if (!(p.omega1 > 0.0 && p.omega2 > 0.0)) {
    throw InvalidArgument("calibrate-decay needs both repumpers on (four_level.omega1, omega2 > 0)");
  }
  const RateParams r = RateParams::from_four_level(p);
  const DecayFit fit = effective_gamma_h(p);
  const auto t = linspace(0.0, cfg.calibrate.t_end_us, cfg.calibrate.samples);
  const auto traj = rate_equation_evolve({0.0, 1.0, 0.0, 0.0}, r, t);

  // One repumper at a time: the other level becomes a trap.
  auto saturation = [](RateParams q, const Populations& start, double rate) {
    const double t_long = 60.0 / rate + 60.0 / q.gamma();
    const std::vector<double> tt{0.0, t_long};
    return rate_equation_evolve(start, q, tt).back()[0];
  };
  RateParams only1 = r, only2 = r;
  only1.b2 = 0.0;
  only2.b1 = 0.0;

  std::vector<double> p0, p1, p2, pe;
  for (const auto& v : traj) {
    p0.push_back(v[0]);
    p1.push_back(v[1]);
    p2.push_back(v[2]);
    pe.push_back(v[3]);
  }
  Json j = export_header("calibrate-decay", cfg.system);
  j["omega1"] = p.omega1;
  j["omega2"] = p.omega2;
  j["delta1"] = p.delta1;
  j["tau1_us"] = tau1_from_omega1(p.omega1, p.delta1, p.gamma0, p.gamma1, p.gamma2);
  j["tau2_us"] = tau2_from_omega2(p.omega2, p.gamma0, p.gamma1, p.gamma2);
  j["light_shift"] = repumper_light_shift(p);
  j["effective_gamma_h_per_ms"] = fit.rate_per_ms;
  j["fit_rms_residual"] = fit.rms_residual;
  j["fit_converged"] = fit.converged;
  j["saturation_repumper1_only"] = saturation(only1, {0.0, 1.0, 0.0, 0.0}, r.b1);
  j["saturation_repumper2_only"] = saturation(only2, {0.0, 0.0, 1.0, 0.0}, r.b2);
  j["trace"] = {{"t_us", t}, {"p0", p0}, {"p1", p1}, {"p2", p2}, {"pe", pe}};
  return j;
}

Json carrier_export(const RunConfig& cfg) {
  const DensityMatrix rho = solve(cfg, nullptr);
  const PhononDistribution pn = phonon_distribution(rho, cfg.system.layout);
  const auto t = linspace(0.0, cfg.carrier.t_end_us, cfg.carrier.samples);
  const double omega0 = khz_to_rad_per_ms(cfg.carrier.rabi_khz) * 1e-3;  // rad/µs
  Json j = export_header("carrier", cfg.system);
  j["rabi_khz"] = cfg.carrier.rabi_khz;
  j["eta"] = cfg.carrier.eta;
  j["t_us"] = t;
  j["p_up"] = carrier_signal(pn.p, omega0, cfg.carrier.eta, t);
  j["phonon_distribution"] = distribution_to_json(pn);
  return j;
}

std::vector<std::filesystem::path> run_task(const RunConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir(cfg.out_dir);
  auto write = [&](const char* name, const Json& j) {
    const auto path = dir / name;
    write_json(path, j);
    return std::vector<std::filesystem::path>{path};
  };
  switch (cfg.task) {
    case Task::steady: return write("steady.json", steady_export(cfg));
    case Task::evolve: return write("evolve.json", evolve_export(cfg));
    case Task::charfun: return write("charfun.json", charfun_export(cfg));
    case Task::diffusion: return write("diffusion.json", diffusion_export(cfg));
    case Task::calibrate_decay: return write("calibrate_decay.json", calibrate_export(cfg));
    case Task::carrier: return write("carrier.json", carrier_export(cfg));
    case Task::sweep: {
      const SweepResult res = run_sweep(cfg);
      if (!res.complete) throw SolverError("sweep stopped before all points were computed");
      const SweepPaths paths(dir);
      return {paths.csv, paths.timing, paths.checkpoint};
    }
  }
  return {};
}

}  // namespace phlaser
