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


#include "phlaser/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>

#include "phlaser/error.hpp"
#include "phlaser/parallel.hpp"
#include "phlaser/phase_space.hpp"
#include "phlaser/tasks.hpp"

namespace phlaser {

namespace {

// Everything that determines the records. Workers and paths are excluded.
Json sweep_identity(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  Json axes_k = Json::array(), axes_g = Json::array();
  for (double v : cfg.sweep.inv_kappa_c_ms) axes_k.push_back(v);
  for (double v : cfg.sweep.inv_gamma_c_us) axes_g.push_back(v);
  return Json{{"system", system_to_json(cfg.system)},
              {"solver",
               {{"residual_tol", s.residual_tol},
                {"integrator", s.integrator == Integrator::sdirk4 ? "sdirk4" : "dopri5"},
                {"rtol", s.rtol},
                {"atol", s.atol},
                {"max_time_ms", s.max_time_ms}}},
              {"sweep",
               {{"inv_kappa_c_ms", axes_k},
                {"inv_gamma_c_us", axes_g},
                {"dark_threshold", cfg.sweep.dark_threshold}}}};
}

void evolve_point(const RunConfig& cfg, const SystemSpec& spec, SweepRecord& rec) {
  const double t_end = cfg.solver.max_time_ms;
  const std::vector<double> t{0.0, 0.5 * t_end, t_end};
  const auto traj = population_trajectory(spec, coherent_start(0.0, spec.layout), t, cfg.solver.evolve_options());
  const auto& mid = traj[1];
  const auto& last = traj[2];
  rec.evolved = true;
  rec.nbar = last.pn.mean;
  rec.sz_h = last.sz_h;
  rec.tail_mass = last.pn.tail_mass;
  if (mid.pn.mean > 0.0 && last.pn.mean > 0.0) rec.growth_rate = std::log(last.pn.mean / mid.pn.mean) / (0.5 * t_end);
  const bool rising = last.pn.mean > (1.0 + kGrowthRiseFlag) * mid.pn.mean;
  rec.growth_flag =
      rec.nbar >= cfg.sweep.dark_threshold && (rising || last.pn.tail_mass > kTailMassWarning);
  if (rec.growth_flag) {
    rec.lindblad_phase = "heating";
  } else {
    rec.lindblad_phase = rec.nbar < cfg.sweep.dark_threshold ? "dark" : "lasing";
  }
}

void steady_point(const RunConfig& cfg, const SystemSpec& spec, SweepRecord& rec) {
  SteadyStateReport rep;
  const DensityMatrix rho = steady_state(spec, SteadyStateOptions{.residual_tol = cfg.solver.residual_tol}, &rep);
  const PhononDistribution pn = phonon_distribution(rho, spec.layout);
  rec.nbar = pn.mean;
  rec.sz_h = heating_sigma_z(rho, spec.layout);
  rec.residual = rep.residual;
  rec.tail_mass = pn.tail_mass;
  if (pn.truncation_warning) {
    rec.lindblad_phase = "unresolved";
  } else {
    rec.lindblad_phase = pn.mean < cfg.sweep.dark_threshold ? "dark" : "lasing";
  }
}

std::vector<std::string> split_lines(const std::string& text, bool* last_terminated) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) lines.push_back(cur);
  *last_terminated = text.empty() || text.back() == '\n';
  return lines;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SystemSpec point_spec(const SystemSpec& base, double inv_kappa_c_ms, double inv_gamma_c_us) {
  if (!(inv_kappa_c_ms > 0.0) || !(inv_gamma_c_us > 0.0)) {
    throw InvalidArgument("sweep axes must be positive");
  }
  SystemSpec s = base;
  s.gamma_c = 1e3 / inv_gamma_c_us;
  s.g_c = std::sqrt(s.gamma_c / inv_kappa_c_ms);
  s.validate();
  return s;
}

SweepRecord evaluate_point(const RunConfig& cfg, int row, int col) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.row = row;
  rec.col = col;
  rec.inv_gamma_c_us = cfg.sweep.inv_gamma_c_us.at(row);
  rec.inv_kappa_c_ms = cfg.sweep.inv_kappa_c_ms.at(col);
  try {
    const SystemSpec spec = point_spec(cfg.system, rec.inv_kappa_c_ms, rec.inv_gamma_c_us);
    const MfParams mf = MfParams::from_spec(spec);
    rec.mf_phase = classify_phase(mf);
    try {
      rec.mf_nbar = steady_n(mf).nbar;
    } catch (const InvalidArgument&) {
      // γ_c = γ_h exactly: the closed form is singular.
    }
    if (rec.mf_phase == Phase::heating || rec.mf_phase == Phase::runaway_corner) {
      evolve_point(cfg, spec, rec);
    } else {
      steady_point(cfg, spec, rec);
    }
    if (std::isfinite(rec.mf_nbar) && rec.mf_nbar > 0.0) rec.nbar_ratio = rec.nbar / rec.mf_nbar;
  } catch (const Error& e) {
    rec.status = e.kind();
    rec.message = e.what();
    rec.lindblad_phase = "error";
  } catch (const std::exception& e) {
    rec.status = "internal";
    rec.message = e.what();
    rec.lindblad_phase = "error";
  }
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

Json record_to_json(const SweepRecord& r) {
  return Json{{"row", r.row},
              {"col", r.col},
              {"inv_kappa_c_ms", number_to_json(r.inv_kappa_c_ms)},
              {"inv_gamma_c_us", number_to_json(r.inv_gamma_c_us)},
              {"mf_phase", phase_name(r.mf_phase)},
              {"mf_nbar", number_to_json(r.mf_nbar)},
              {"lindblad_phase", r.lindblad_phase},
              {"nbar", number_to_json(r.nbar)},
              {"sz_h", number_to_json(r.sz_h)},
              {"residual", number_to_json(r.residual)},
              {"tail_mass", number_to_json(r.tail_mass)},
              {"nbar_ratio", number_to_json(r.nbar_ratio)},
              {"growth_rate", number_to_json(r.growth_rate)},
              {"evolved", r.evolved},
              {"growth_flag", r.growth_flag},
              {"status", r.status},
              {"message", r.message},
              {"wall_time_s", r.wall_time_s}};
}

SweepRecord record_from_json(const Json& j) {
  SweepRecord r;
  r.row = j.at("row").get<int>();
  r.col = j.at("col").get<int>();
  r.inv_kappa_c_ms = number_from_json(j.at("inv_kappa_c_ms"));
  r.inv_gamma_c_us = number_from_json(j.at("inv_gamma_c_us"));
  r.mf_phase = phase_from_name(j.at("mf_phase").get<std::string>());
  r.mf_nbar = number_from_json(j.at("mf_nbar"));
  r.lindblad_phase = j.at("lindblad_phase").get<std::string>();
  r.nbar = number_from_json(j.at("nbar"));
  r.sz_h = number_from_json(j.at("sz_h"));
  r.residual = number_from_json(j.at("residual"));
  r.tail_mass = number_from_json(j.at("tail_mass"));
  r.nbar_ratio = number_from_json(j.at("nbar_ratio"));
  r.growth_rate = number_from_json(j.at("growth_rate"));
  r.evolved = j.at("evolved").get<bool>();
  r.growth_flag = j.at("growth_flag").get<bool>();
  r.status = j.at("status").get<std::string>();
  r.message = j.at("message").get<std::string>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

SweepPaths::SweepPaths(const std::filesystem::path& dir)
    : csv(dir / "sweep.csv"),
      checkpoint(dir / "sweep.checkpoint.jsonl"),
      bitmap(dir / "sweep.checkpoint.bitmap"),
      timing(dir / "sweep_timing.csv") {}

SweepResult run_sweep(const RunConfig& cfg, const SweepOptions& opt) {
  RunConfig run = cfg;
  run.task = Task::sweep;
  run.validate();
  const int rows = static_cast<int>(run.sweep.inv_gamma_c_us.size());
  const int cols = static_cast<int>(run.sweep.inv_kappa_c_ms.size());
  const int total = rows * cols;
  const SweepPaths paths(run.out_dir);
  const Json identity = sweep_identity(run);
  const Json header{{"kind", "sweep_checkpoint"}, {"schema_version", kSchemaVersion}, {"config", identity}};

  std::vector<std::optional<SweepRecord>> done(total);
  SweepResult result;
  if (run.resume && std::filesystem::exists(paths.checkpoint)) {
    bool terminated = true;
    const auto lines = split_lines(read_file(paths.checkpoint), &terminated);
    Json head;
    try {
      head = lines.empty() ? Json() : Json::parse(lines.front());
    } catch (const Json::exception&) {
    }
    if (!head.is_object() || head.value("config", Json()) != identity) {
      throw ConfigError("checkpoint " + paths.checkpoint.string() + " was written for a different configuration");
    }
    std::string bits = std::filesystem::exists(paths.bitmap) ? read_file(paths.bitmap) : std::string();
    while (!bits.empty() && (bits.back() == '\n' || bits.back() == '\r')) bits.pop_back();
    if (bits.size() != static_cast<size_t>(total)) bits.assign(total, '0');
    for (size_t i = 1; i < lines.size(); ++i) {
      SweepRecord r;
      try {
        r = record_from_json(Json::parse(lines[i]));
      } catch (const std::exception&) {
        // A crash mid-write leaves a partial last line; anything else is damage.
        if (i + 1 == lines.size()) break;
        throw IoError("corrupt checkpoint line " + std::to_string(i + 1) + " in " + paths.checkpoint.string());
      }
      if (r.row < 0 || r.row >= rows || r.col < 0 || r.col >= cols) {
        throw IoError("checkpoint record outside the grid in " + paths.checkpoint.string());
      }
      const int idx = r.row * cols + r.col;
      if (bits[idx] == '1') done[idx] = std::move(r);
    }
  }

  // Compact: header plus the confirmed records. Appends follow.
  std::string bitmap(total, '0');
  {
    std::string text = header.dump() + "\n";
    for (int i = 0; i < total; ++i) {
      if (!done[i]) continue;
      text += record_to_json(*done[i]).dump() + "\n";
      bitmap[i] = '1';
      ++result.resumed;
    }
    write_text_atomic(paths.checkpoint, text);
    write_text_atomic(paths.bitmap, bitmap + "\n");
  }

  std::vector<int> pending;
  for (int i = 0; i < total; ++i) {
    if (!done[i]) pending.push_back(i);
  }
  std::ofstream log(paths.checkpoint, std::ios::binary | std::ios::app);
  if (!log) throw IoError("cannot append to " + paths.checkpoint.string());
  std::mutex mu;
  std::atomic<bool> stop{opt.stop_after == 0};
  int computed = 0;
  parallel_for(static_cast<int>(pending.size()), run.workers, [&](int k) {
    if (stop.load()) return;
    const int idx = pending[k];
    SweepRecord rec = evaluate_point(run, idx / cols, idx % cols);
    std::lock_guard lock(mu);
    if (stop.load()) return;
    log << record_to_json(rec).dump() << "\n";
    log.flush();
    if (!log) throw IoError("write failed: " + paths.checkpoint.string());
    bitmap[idx] = '1';
    write_text_atomic(paths.bitmap, bitmap + "\n");
    done[idx] = std::move(rec);
    if (++computed == opt.stop_after) stop.store(true);
  });
  log.close();

  result.computed = computed;
  for (auto& r : done) {
    if (r) result.records.push_back(std::move(*r));
  }
  result.complete = static_cast<int>(result.records.size()) == total;
  if (result.complete) {
    write_text_atomic(paths.csv, sweep_csv(result.records, run.system));
    std::string timing = "row,col,wall_time_s\n";
    for (const auto& r : result.records) {
      timing += std::to_string(r.row) + "," + std::to_string(r.col) + "," + format_double(r.wall_time_s) + "\n";
    }
    write_text_atomic(paths.timing, timing);
  }
  return result;
}

std::string sweep_csv(const std::vector<SweepRecord>& records, const SystemSpec& base) {
  std::string out;
  out += "# schema_version: " + std::to_string(kSchemaVersion) + "\n";
  out += "# kind: sweep\n";
  out += "# system: " + system_to_json(base).dump() + "\n";
  out +=
      "inv_kappa_c_ms,inv_gamma_c_us,nbar,sz_h,phase,residual,tail_mass,row,col,lindblad_phase,mf_nbar,"
      "nbar_ratio,growth_rate,growth_flag,evolved,status\n";
  for (const auto& r : records) {
    out += format_double(r.inv_kappa_c_ms) + "," + format_double(r.inv_gamma_c_us) + "," + format_double(r.nbar) +
           "," + format_double(r.sz_h) + "," + std::string(phase_name(r.mf_phase)) + "," +
           format_double(r.residual) + "," + format_double(r.tail_mass) + "," + std::to_string(r.row) + "," +
           std::to_string(r.col) + "," + r.lindblad_phase + "," + format_double(r.mf_nbar) + "," +
           format_double(r.nbar_ratio) + "," + format_double(r.growth_rate) + "," +
           (r.growth_flag ? "1" : "0") + "," + (r.evolved ? "1" : "0") + "," + r.status + "\n";
  }
  return out;
}

bool labels_agree(Phase mf, std::string_view lindblad) {
  switch (mf) {
    case Phase::dark: return lindblad == "dark";
    case Phase::lasing: return lindblad == "lasing";
    case Phase::heating:
    case Phase::runaway_corner: return lindblad == "heating";
    case Phase::boundary: return false;
  }
  return false;
}

AgreementSummary label_agreement(const std::vector<SweepRecord>& records, int rows, int cols) {
  if (static_cast<int>(records.size()) != rows * cols) {
    throw DimensionError("label_agreement: record count does not match the grid");
  }
  auto at = [&](int r, int c) -> const SweepRecord& { return records[r * cols + c]; };
  AgreementSummary s;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const SweepRecord& p = at(r, c);
      if (p.row != r || p.col != c) throw InvalidArgument("label_agreement: records not in (row, col) order");
      if (p.mf_phase == Phase::boundary) continue;
      bool interior = true;
      const int dr[] = {-1, 1, 0, 0};
      const int dc[] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const int rr = r + dr[k], cc = c + dc[k];
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
        interior = interior && at(rr, cc).mf_phase == p.mf_phase;
      }
      if (!interior) continue;
      ++s.off_boundary;
      if (labels_agree(p.mf_phase, p.lindblad_phase)) ++s.agreeing;
    }
  }
  return s;
}

}  // namespace phlaser
