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

#include <string>
#include <string_view>
#include <vector>

#include "phlaser/ion_models.hpp"
#include "phlaser/lindblad.hpp"

namespace phlaser {

enum class Task { steady, evolve, sweep, charfun, diffusion, calibrate_decay, carrier };

std::string_view task_name(Task t);
/// Throws ConfigError for unknown names.
Task task_from_name(std::string_view name);

struct SolverConfig {
  double residual_tol = 1e-8;
  Integrator integrator = Integrator::dopri5;
  double rtol = 1e-10;
  double atol = 1e-12;
  /// Length of the finite-time evolve used for heating points, ms.
  double max_time_ms = 2.0;

  EvolveOptions evolve_options() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct SweepConfig {
  std::vector<double> inv_kappa_c_ms;  // columns
  std::vector<double> inv_gamma_c_us;  // rows
  /// Lindblad n̄ below this counts as dark.
  double dark_threshold = 0.5;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct EvolveConfig {
  double t_end_ms = 1.0;
  int samples = 21;
  /// "ground" (vacuum, both ions in their lower level) or "coherent".
  std::string initial = "ground";
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  friend bool operator==(const EvolveConfig&, const EvolveConfig&) = default;
};

struct CharfunConfig {
  std::vector<double> axes_deg{0.0, 90.0};
  double beta_max = 0.7;
  double beta_step = 0.02;
  double pad_to = 1.0;
  bool wigner = false;
  double wigner_half_width = 5.0;
  double wigner_step = 0.1;
  friend bool operator==(const CharfunConfig&, const CharfunConfig&) = default;
};

struct DiffusionConfig {
  /// Initial intensity |α|² of the coherent start.
  double intensity = 4.4;
  double t_end_ms = 1.5;
  int samples = 31;
  friend bool operator==(const DiffusionConfig&, const DiffusionConfig&) = default;
};

struct CalibrateConfig {
  double t_end_us = 1.0;
  int samples = 201;
  friend bool operator==(const CalibrateConfig&, const CalibrateConfig&) = default;
};

struct CarrierConfig {
  double rabi_khz = 50.0;  // bare carrier Rabi frequency Ω₀/2π
  double eta = 0.15;
  double t_end_us = 100.0;
  int samples = 201;
  friend bool operator==(const CarrierConfig&, const CarrierConfig&) = default;
};

struct RunConfig {
  Task task = Task::steady;
  SystemSpec system;
  SolverConfig solver;
  SweepConfig sweep;
  EvolveConfig evolve;
  CharfunConfig charfun;
  DiffusionConfig diffusion;
  CalibrateConfig calibrate;
  CarrierConfig carrier;
  std::string out_dir = "out";
  int workers = 0;  // 0: hardware concurrency
  bool resume = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses YAML run-config text. Unknown keys are rejected. Couplings given as
/// `*_khz` are converted to rad/ms. Syntax errors report line and column.
/// Throws ConfigError.
RunConfig parse_config(std::string_view text);
/// Reads and parses a file. Throws IoError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Canonical YAML (rad/ms, explicit fields, no table_row). parse_config of the
/// result reproduces `cfg` exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace phlaser
