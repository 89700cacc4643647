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
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "phlaser/config.hpp"
#include "phlaser/export.hpp"
#include "phlaser/meanfield.hpp"

namespace phlaser {

/// Base spec with the cooling ion set to one grid point:
/// γ_c = 1/(1/γ_c), g_c = √(γ_c κ_c).
SystemSpec point_spec(const SystemSpec& base, double inv_kappa_c_ms, double inv_gamma_c_us);

/// Relative n̄ rise over the second half of the evolve window above which a
/// point counts as still growing.
inline constexpr double kGrowthRiseFlag = 0.05;

struct SweepRecord {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  int row = 0;  // index into inv_gamma_c_us
  int col = 0;  // index into inv_kappa_c_ms
  double inv_kappa_c_ms = 0.0;
  double inv_gamma_c_us = 0.0;
  Phase mf_phase = Phase::dark;
  double mf_nbar = kNaN;
  /// dark, lasing, heating, unresolved, or error.
  std::string lindblad_phase;
  double nbar = kNaN;
  double sz_h = kNaN;
  double residual = kNaN;  // steady-state residual; NaN for evolved points
  double tail_mass = kNaN;
  double nbar_ratio = kNaN;  // Lindblad / mean-field
  /// ln(n̄(T)/n̄(T/2)) / (T/2) of the finite-time evolve, 1/ms.
  double growth_rate = kNaN;
  bool evolved = false;
  bool growth_flag = false;
  std::string status = "ok";  // or the error kind
  std::string message;
  double wall_time_s = 0.0;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Computes one grid point. Solver failures are recorded, not thrown.
SweepRecord evaluate_point(const RunConfig& cfg, int row, int col);

Json record_to_json(const SweepRecord& r);
SweepRecord record_from_json(const Json& j);

struct SweepOptions {
  /// Stop after this many newly computed points (checkpoint test hook).
  int stop_after = -1;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // (row, col) order; only completed points
  bool complete = false;
  int computed = 0;
  int resumed = 0;
};

struct SweepPaths {
  std::filesystem::path csv, checkpoint, bitmap, timing;
  explicit SweepPaths(const std::filesystem::path& dir);
};

/// Runs the grid in cfg.out_dir with checkpointing. With cfg.resume, points
/// already in a matching checkpoint are reused. The CSV is written once all
/// points are done.
SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opt = {});

/// Deterministic sweep table. Leading '#' lines carry schema_version and the
/// resolved base SystemSpec.
std::string sweep_csv(const std::vector<SweepRecord>& records, const SystemSpec& base);

/// Mean-field and Lindblad labels name the same phase. In the runaway corner
/// fluctuations push the nominally dark state into runaway growth, so it
/// pairs with heating.
bool labels_agree(Phase mf, std::string_view lindblad);

struct AgreementSummary {
  int off_boundary = 0;
  int agreeing = 0;
  double fraction() const { return off_boundary ? static_cast<double>(agreeing) / off_boundary : 0.0; }
};

/// Label agreement over points whose existing 4-neighbours all carry the same
/// mean-field label. `records` must hold the complete rows × cols grid.
AgreementSummary label_agreement(const std::vector<SweepRecord>& records, int rows, int cols);

}  // namespace phlaser
