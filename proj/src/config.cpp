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


#include "phlaser/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "phlaser/error.hpp"
#include "phlaser/export.hpp"

namespace phlaser {

namespace {

constexpr int kMaxFockCutoff = 400;

std::string where(const YAML::Mark& m) {
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

// Strict view of one mapping: every key must be consumed before finish().
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(path_ + ": expected a mapping" + where(node_.Mark()));
    }
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return to_number(get(key), key);
  }
  double number(const std::string& key, double def) { return opt_number(key).value_or(def); }

  int integer(const std::string& key, int def) {
    if (!has(key)) return def;
    const YAML::Node n = get(key);
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key) + ": expected an integer" + where(n.Mark()));
    }
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const YAML::Node n = get(key);
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key) + ": expected true or false" + where(n.Mark()));
    }
  }

  std::optional<std::string> opt_string(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const YAML::Node n = get(key);
    if (!n.IsScalar()) throw ConfigError(field(key) + ": expected a string" + where(n.Mark()));
    return n.Scalar();
  }
  std::string string(const std::string& key, const std::string& def) { return opt_string(key).value_or(def); }

  /// Either a sequence of numbers or {from, to, points, spacing}.
  std::optional<std::vector<double>> opt_axis(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const YAML::Node n = get(key);
    if (n.IsSequence()) {
      std::vector<double> v;
      for (const auto& x : n) v.push_back(to_number(x, key));
      return v;
    }
    MapReader r(n, field(key));
    const double from = r.number("from", std::nan(""));
    const double to = r.number("to", std::nan(""));
    const int points = r.integer("points", 0);
    const std::string spacing = r.string("spacing", "linear");
    r.finish();
    if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError(field(key) + ": 'from' and 'to' are required");
    if (points < 1) throw ConfigError(field(key) + ".points must be >= 1");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
      const double s = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
      if (spacing == "linear") {
        v[i] = from + s * (to - from);
      } else if (spacing == "log") {
        if (!(from > 0.0 && to > 0.0)) throw ConfigError(field(key) + ": log spacing needs positive bounds");
        v[i] = from * std::pow(to / from, s);
      } else {
        throw ConfigError(field(key) + ".spacing must be 'linear' or 'log'");
      }
    }
    return v;
  }

  std::optional<std::vector<double>> opt_numbers(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const YAML::Node n = get(key);
    if (!n.IsSequence()) throw ConfigError(field(key) + ": expected a list" + where(n.Mark()));
    std::vector<double> v;
    for (const auto& x : n) v.push_back(to_number(x, key));
    return v;
  }

  MapReader child(const std::string& key) {
    if (!has(key)) return MapReader(YAML::Node(), field(key));
    return MapReader(get(key), field(key));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!used_.contains(key)) throw ConfigError("unknown key '" + field(key) + "'" + where(kv.first.Mark()));
    }
  }

 private:
  YAML::Node get(const std::string& key) {
    used_.insert(key);
    return node_[key];
  }

  double to_number(const YAML::Node& n, const std::string& key) const {
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      throw ConfigError(field(key) + ": expected a number" + where(n.Mark()));
    }
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

double coupling(MapReader& r, const std::string& name, double current) {
  const auto rad = r.opt_number(name);
  const auto khz = r.opt_number(name + "_khz");
  if (rad && khz) throw ConfigError(r.field(name) + ": give either " + name + " or " + name + "_khz");
  if (khz) return khz_to_rad_per_ms(*khz);
  return rad.value_or(current);
}

BerylliumModel model_from_name(const std::string& s, const std::string& field) {
  if (s == "two_level") return BerylliumModel::two_level;
  if (s == "two_level_dephased") return BerylliumModel::two_level_dephased;
  if (s == "four_level") return BerylliumModel::four_level;
  throw ConfigError(field + ": unknown model '" + s + "' (two_level, two_level_dephased, four_level)");
}

SystemSpec parse_system(MapReader r) {
  const auto fock = r.opt_number("fock_cutoff");
  if (!fock) throw ConfigError(r.field("fock_cutoff") + ": required");
  const int n = r.integer("fock_cutoff", 0);
  if (n < 2 || n > kMaxFockCutoff) {
    throw ConfigError(r.field("fock_cutoff") + " must lie in [2, " + std::to_string(kMaxFockCutoff) + "]");
  }
  const auto model_name = r.opt_string("model");
  const bool has_model = model_name.has_value();
  const BerylliumModel model =
      has_model ? model_from_name(*model_name, r.field("model")) : BerylliumModel::two_level;
  const auto row = r.opt_string("table_row");

  SystemSpec s;
  if (row) {
    s = spec_from_table(table_row(*row), model, n);
  } else if (model == BerylliumModel::four_level) {
    s.be_levels = 4;
    s.four_level.delta1 = kRepumper1Detuning;
  }
  if (r.has("be_levels")) {
    const int levels = r.integer("be_levels", 2);
    if (has_model && levels != (model == BerylliumModel::four_level ? 4 : 2)) {
      throw ConfigError(r.field("be_levels") + " contradicts model '" + *model_name + "'");
    }
    s.be_levels = levels;
  }

  s.g_h = coupling(r, "g_h", s.g_h);
  s.g_c = coupling(r, "g_c", s.g_c);
  s.gamma_h = r.number("gamma_h", s.gamma_h);
  s.gamma_c = r.number("gamma_c", s.gamma_c);
  if (r.has("gamma_e")) {
    s.gamma_e = r.number("gamma_e", 0.0);
  } else if (model == BerylliumModel::two_level_dephased) {
    s.gamma_e = kDephasingRatio * s.gamma_h;
  }
  s.eta_h = r.number("eta_h", s.eta_h);
  s.eta_c = r.number("eta_c", s.eta_c);
  s.nonlinear_ld = r.boolean("nonlinear_ld", s.nonlinear_ld);
  s.omega_m = r.number("omega_m", s.omega_m);

  {
    MapReader f = r.child("four_level");
    auto& p = s.four_level;
    p.delta1 = f.number("delta1", p.delta1);
    p.gamma0 = f.number("gamma0", p.gamma0);
    p.gamma1 = f.number("gamma1", p.gamma1);
    p.gamma2 = f.number("gamma2", p.gamma2);
    p.compensate_light_shift = f.boolean("compensate_light_shift", p.compensate_light_shift);
    const auto o1 = f.opt_number("omega1");
    const auto t1 = f.opt_number("tau1_us");
    const auto o2 = f.opt_number("omega2");
    const auto t2 = f.opt_number("tau2_us");
    if (o1 && t1) throw ConfigError(f.field("omega1") + ": give either omega1 or tau1_us");
    if (o2 && t2) throw ConfigError(f.field("omega2") + ": give either omega2 or tau2_us");
    try {
      if (o1) p.omega1 = *o1;
      if (t1) p.omega1 = omega1_from_tau1(*t1, p.delta1, p.gamma0, p.gamma1, p.gamma2);
      if (o2) p.omega2 = *o2;
      if (t2) p.omega2 = omega2_from_tau2(*t2, p.gamma0, p.gamma1, p.gamma2);
    } catch (const InvalidArgument& e) {
      throw ConfigError(f.field("four_level") + ": " + e.what());
    }
    f.finish();
  }
  if (r.has("tickle")) {
    MapReader t = r.child("tickle");
    s.tickle.g_t = coupling(t, "g_t", s.tickle.g_t);
    s.tickle.phase = t.number("phase", s.tickle.phase);
    s.tickle.enabled = t.boolean("enabled", true);
    t.finish();
  }
  r.finish();
  s.layout = SpaceLayout(n, s.be_levels, 2);
  s.validate();
  return s;
}

Integrator integrator_from_name(const std::string& s, const std::string& field) {
  if (s == "dopri5") return Integrator::dopri5;
  if (s == "sdirk4") return Integrator::sdirk4;
  throw ConfigError(field + ": unknown integrator '" + s + "' (dopri5, sdirk4)");
}

std::string_view integrator_name(Integrator i) { return i == Integrator::sdirk4 ? "sdirk4" : "dopri5"; }

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + " " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::string_view task_name(Task t) {
  switch (t) {
    case Task::steady: return "steady";
    case Task::evolve: return "evolve";
    case Task::sweep: return "sweep";
    case Task::charfun: return "charfun";
    case Task::diffusion: return "diffusion";
    case Task::calibrate_decay: return "calibrate-decay";
    case Task::carrier: return "carrier";
  }
  return "steady";
}

Task task_from_name(std::string_view name) {
  for (Task t : {Task::steady, Task::evolve, Task::sweep, Task::charfun, Task::diffusion, Task::calibrate_decay,
                 Task::carrier}) {
    if (task_name(t) == name) return t;
  }
  throw ConfigError("task: unknown task '" + std::string(name) + "'");
}

EvolveOptions SolverConfig::evolve_options() const {
  EvolveOptions o;
  o.method = integrator;
  o.ode.rtol = rtol;
  o.ode.atol = atol;
  return o;
}

void RunConfig::validate() const {
  system.validate();
  require(system.layout.fock_cutoff <= kMaxFockCutoff, "system.fock_cutoff",
          "must be <= " + std::to_string(kMaxFockCutoff));
  require(positive(solver.residual_tol) && solver.residual_tol <= 1e-2, "solver.residual_tol", "must lie in (0, 1e-2]");
  require(positive(solver.rtol) && solver.rtol <= 1e-3, "solver.rtol", "must lie in (0, 1e-3]");
  require(positive(solver.atol), "solver.atol", "must be > 0");
  require(positive(solver.max_time_ms), "solver.max_time_ms", "must be > 0");
  if (task == Task::sweep) {
    require(!sweep.inv_kappa_c_ms.empty(), "sweep.inv_kappa_c_ms", "must not be empty");
    require(!sweep.inv_gamma_c_us.empty(), "sweep.inv_gamma_c_us", "must not be empty");
  }
  for (double v : sweep.inv_kappa_c_ms) require(positive(v), "sweep.inv_kappa_c_ms", "entries must be > 0");
  for (double v : sweep.inv_gamma_c_us) require(positive(v), "sweep.inv_gamma_c_us", "entries must be > 0");
  require(positive(sweep.dark_threshold), "sweep.dark_threshold", "must be > 0");
  require(positive(evolve.t_end_ms), "evolve.t_end_ms", "must be > 0");
  require(evolve.samples >= 2, "evolve.samples", "must be >= 2");
  require(evolve.initial == "ground" || evolve.initial == "coherent", "evolve.initial",
          "must be 'ground' or 'coherent'");
  require(std::isfinite(evolve.alpha_re) && std::isfinite(evolve.alpha_im), "evolve.alpha", "must be finite");
  require(!charfun.axes_deg.empty(), "charfun.axes_deg", "must not be empty");
  for (double a : charfun.axes_deg) require(std::isfinite(a), "charfun.axes_deg", "entries must be finite");
  require(positive(charfun.beta_step), "charfun.beta_step", "must be > 0");
  require(positive(charfun.beta_max), "charfun.beta_max", "must be > 0");
  require(charfun.pad_to >= charfun.beta_max, "charfun.pad_to", "must be >= charfun.beta_max");
  require(positive(charfun.wigner_half_width), "charfun.wigner_half_width", "must be > 0");
  require(positive(charfun.wigner_step), "charfun.wigner_step", "must be > 0");
  require(positive(diffusion.intensity), "diffusion.intensity", "must be > 0");
  require(positive(diffusion.t_end_ms), "diffusion.t_end_ms", "must be > 0");
  require(diffusion.samples >= 3, "diffusion.samples", "must be >= 3");
  require(positive(calibrate.t_end_us), "calibrate.t_end_us", "must be > 0");
  require(calibrate.samples >= 2, "calibrate.samples", "must be >= 2");
  require(positive(carrier.rabi_khz), "carrier.rabi_khz", "must be > 0");
  require(carrier.eta >= 0.0 && carrier.eta < 1.0, "carrier.eta", "must lie in [0, 1)");
  require(positive(carrier.t_end_us), "carrier.t_end_us", "must be > 0");
  require(carrier.samples >= 2, "carrier.samples", "must be >= 2");
  require(workers >= 0, "workers", "must be >= 0");
  require(!out_dir.empty(), "output.dir", "must not be empty");
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error" + where(e.mark) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  MapReader r(root, "");
  RunConfig cfg;

  if (r.has("schema_version")) {
    const int v = r.integer("schema_version", kSchemaVersion);
    if (v != kSchemaVersion) throw ConfigError("schema_version: unsupported version " + std::to_string(v));
  }
  if (auto t = r.opt_string("task")) cfg.task = task_from_name(*t);
  if (!r.has("system")) throw ConfigError("system: required");
  cfg.system = parse_system(r.child("system"));

  {
    MapReader s = r.child("solver");
    cfg.solver.residual_tol = s.number("residual_tol", cfg.solver.residual_tol);
    if (auto name = s.opt_string("integrator")) cfg.solver.integrator = integrator_from_name(*name, s.field("integrator"));
    cfg.solver.rtol = s.number("rtol", cfg.solver.rtol);
    cfg.solver.atol = s.number("atol", cfg.solver.atol);
    cfg.solver.max_time_ms = s.number("max_time_ms", cfg.solver.max_time_ms);
    s.finish();
  }
  {
    MapReader s = r.child("sweep");
    if (auto v = s.opt_axis("inv_kappa_c_ms")) cfg.sweep.inv_kappa_c_ms = *v;
    if (auto v = s.opt_axis("inv_gamma_c_us")) cfg.sweep.inv_gamma_c_us = *v;
    cfg.sweep.dark_threshold = s.number("dark_threshold", cfg.sweep.dark_threshold);
    s.finish();
  }
  {
    MapReader s = r.child("evolve");
    cfg.evolve.t_end_ms = s.number("t_end_ms", cfg.evolve.t_end_ms);
    cfg.evolve.samples = s.integer("samples", cfg.evolve.samples);
    cfg.evolve.initial = s.string("initial", cfg.evolve.initial);
    cfg.evolve.alpha_re = s.number("alpha_re", cfg.evolve.alpha_re);
    cfg.evolve.alpha_im = s.number("alpha_im", cfg.evolve.alpha_im);
    s.finish();
  }
  {
    MapReader s = r.child("charfun");
    if (auto v = s.opt_numbers("axes_deg")) cfg.charfun.axes_deg = *v;
    cfg.charfun.beta_max = s.number("beta_max", cfg.charfun.beta_max);
    cfg.charfun.beta_step = s.number("beta_step", cfg.charfun.beta_step);
    cfg.charfun.pad_to = s.number("pad_to", cfg.charfun.pad_to);
    cfg.charfun.wigner = s.boolean("wigner", cfg.charfun.wigner);
    cfg.charfun.wigner_half_width = s.number("wigner_half_width", cfg.charfun.wigner_half_width);
    cfg.charfun.wigner_step = s.number("wigner_step", cfg.charfun.wigner_step);
    s.finish();
  }
  {
    MapReader s = r.child("diffusion");
    cfg.diffusion.intensity = s.number("intensity", cfg.diffusion.intensity);
    cfg.diffusion.t_end_ms = s.number("t_end_ms", cfg.diffusion.t_end_ms);
    cfg.diffusion.samples = s.integer("samples", cfg.diffusion.samples);
    s.finish();
  }
  {
    MapReader s = r.child("calibrate");
    cfg.calibrate.t_end_us = s.number("t_end_us", cfg.calibrate.t_end_us);
    cfg.calibrate.samples = s.integer("samples", cfg.calibrate.samples);
    s.finish();
  }
  {
    MapReader s = r.child("carrier");
    cfg.carrier.rabi_khz = s.number("rabi_khz", cfg.carrier.rabi_khz);
    cfg.carrier.eta = s.number("eta", cfg.carrier.eta);
    cfg.carrier.t_end_us = s.number("t_end_us", cfg.carrier.t_end_us);
    cfg.carrier.samples = s.integer("samples", cfg.carrier.samples);
    s.finish();
  }
  {
    MapReader s = r.child("output");
    cfg.out_dir = s.string("dir", cfg.out_dir);
    s.finish();
  }
  cfg.workers = r.integer("workers", cfg.workers);
  cfg.resume = r.boolean("resume", cfg.resume);
  r.finish();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

void emit(YAML::Emitter& e, const char* key, double v) { e << YAML::Key << key << YAML::Value << format_double(v); }

void emit_list(YAML::Emitter& e, const char* key, const std::vector<double>& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double x : v) e << format_double(x);
  e << YAML::EndSeq;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
  const SystemSpec& s = cfg.system;
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "schema_version" << YAML::Value << kSchemaVersion;
  e << YAML::Key << "task" << YAML::Value << std::string(task_name(cfg.task));

  e << YAML::Key << "system" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "be_levels" << YAML::Value << s.be_levels;
  e << YAML::Key << "fock_cutoff" << YAML::Value << s.layout.fock_cutoff;
  emit(e, "g_h", s.g_h);
  emit(e, "g_c", s.g_c);
  emit(e, "gamma_h", s.gamma_h);
  emit(e, "gamma_c", s.gamma_c);
  emit(e, "gamma_e", s.gamma_e);
  emit(e, "eta_h", s.eta_h);
  emit(e, "eta_c", s.eta_c);
  e << YAML::Key << "nonlinear_ld" << YAML::Value << s.nonlinear_ld;
  emit(e, "omega_m", s.omega_m);
  e << YAML::Key << "four_level" << YAML::Value << YAML::BeginMap;
  emit(e, "omega1", s.four_level.omega1);
  emit(e, "omega2", s.four_level.omega2);
  emit(e, "delta1", s.four_level.delta1);
  emit(e, "gamma0", s.four_level.gamma0);
  emit(e, "gamma1", s.four_level.gamma1);
  emit(e, "gamma2", s.four_level.gamma2);
  e << YAML::Key << "compensate_light_shift" << YAML::Value << s.four_level.compensate_light_shift;
  e << YAML::EndMap;
  e << YAML::Key << "tickle" << YAML::Value << YAML::BeginMap;
  emit(e, "g_t", s.tickle.g_t);
  emit(e, "phase", s.tickle.phase);
  e << YAML::Key << "enabled" << YAML::Value << s.tickle.enabled;
  e << YAML::EndMap;
  e << YAML::EndMap;

  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  emit(e, "residual_tol", cfg.solver.residual_tol);
  e << YAML::Key << "integrator" << YAML::Value << std::string(integrator_name(cfg.solver.integrator));
  emit(e, "rtol", cfg.solver.rtol);
  emit(e, "atol", cfg.solver.atol);
  emit(e, "max_time_ms", cfg.solver.max_time_ms);
  e << YAML::EndMap;

  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  emit_list(e, "inv_kappa_c_ms", cfg.sweep.inv_kappa_c_ms);
  emit_list(e, "inv_gamma_c_us", cfg.sweep.inv_gamma_c_us);
  emit(e, "dark_threshold", cfg.sweep.dark_threshold);
  e << YAML::EndMap;

  e << YAML::Key << "evolve" << YAML::Value << YAML::BeginMap;
  emit(e, "t_end_ms", cfg.evolve.t_end_ms);
  e << YAML::Key << "samples" << YAML::Value << cfg.evolve.samples;
  e << YAML::Key << "initial" << YAML::Value << cfg.evolve.initial;
  emit(e, "alpha_re", cfg.evolve.alpha_re);
  emit(e, "alpha_im", cfg.evolve.alpha_im);
  e << YAML::EndMap;

  e << YAML::Key << "charfun" << YAML::Value << YAML::BeginMap;
  emit_list(e, "axes_deg", cfg.charfun.axes_deg);
  emit(e, "beta_max", cfg.charfun.beta_max);
  emit(e, "beta_step", cfg.charfun.beta_step);
  emit(e, "pad_to", cfg.charfun.pad_to);
  e << YAML::Key << "wigner" << YAML::Value << cfg.charfun.wigner;
  emit(e, "wigner_half_width", cfg.charfun.wigner_half_width);
  emit(e, "wigner_step", cfg.charfun.wigner_step);
  e << YAML::EndMap;

  e << YAML::Key << "diffusion" << YAML::Value << YAML::BeginMap;
  emit(e, "intensity", cfg.diffusion.intensity);
  emit(e, "t_end_ms", cfg.diffusion.t_end_ms);
  e << YAML::Key << "samples" << YAML::Value << cfg.diffusion.samples;
  e << YAML::EndMap;

  e << YAML::Key << "calibrate" << YAML::Value << YAML::BeginMap;
  emit(e, "t_end_us", cfg.calibrate.t_end_us);
  e << YAML::Key << "samples" << YAML::Value << cfg.calibrate.samples;
  e << YAML::EndMap;

  e << YAML::Key << "carrier" << YAML::Value << YAML::BeginMap;
  emit(e, "rabi_khz", cfg.carrier.rabi_khz);
  emit(e, "eta", cfg.carrier.eta);
  emit(e, "t_end_us", cfg.carrier.t_end_us);
  e << YAML::Key << "samples" << YAML::Value << cfg.carrier.samples;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << cfg.out_dir;
  e << YAML::EndMap;
  e << YAML::Key << "workers" << YAML::Value << cfg.workers;
  e << YAML::Key << "resume" << YAML::Value << cfg.resume;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace phlaser
