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

#include <filesystem>
#include <span>
#include <vector>

#include "phlaser/config.hpp"
#include "phlaser/export.hpp"
#include "phlaser/lindblad.hpp"

namespace phlaser {

/// <σ_z> of the heating-ion qubit.
double heating_sigma_z(const DensityMatrix& rho, const SpaceLayout& layout);

struct PopulationSample {
  double t_ms = 0.0;
  PhononDistribution pn;
  double sz_h = 0.0;
};

/// Phonon distribution and <σ_z^h> along a trajectory from `rho0`. Populations
/// only involve the zero-charge sector, which is all that is propagated when
/// the tickle is off.
std::vector<PopulationSample> population_trajectory(const SystemSpec& spec, const DensityMatrix& rho0,
                                                    std::span<const double> t_grid,
                                                    const EvolveOptions& opt = {});

/// Both ions in their lower level, motion in |α>.
DensityMatrix initial_state(const RunConfig& cfg);

/// Runs cfg.task and writes its exports into cfg.out_dir. Returns the files
/// written.
std::vector<std::filesystem::path> run_task(const RunConfig& cfg);

// Export builders used by run_task.
Json steady_export(const RunConfig& cfg);
Json evolve_export(const RunConfig& cfg);
Json charfun_export(const RunConfig& cfg);
Json diffusion_export(const RunConfig& cfg);
Json calibrate_export(const RunConfig& cfg);
Json carrier_export(const RunConfig& cfg);

}  // namespace phlaser
