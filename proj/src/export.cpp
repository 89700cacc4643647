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


#include "phlaser/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "phlaser/error.hpp"

namespace phlaser {

namespace {

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown field '" + key + "'");
  }
  for (auto a : allowed) {
    if (!j.contains(a)) throw ConfigError(where + ": missing field '" + std::string(a) + "'");
  }
}

std::vector<double> doubles(const Json& j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(number_from_json(x));
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf, end);
}

Json number_to_json(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw ConfigError("expected a number, got " + j.dump());
}

Json system_to_json(const SystemSpec& s) {
  const auto& f = s.four_level;
  return Json{
      {"be_levels", s.be_levels},
      {"fock_cutoff", s.layout.fock_cutoff},
      {"g_h", s.g_h},
      {"g_c", s.g_c},
      {"gamma_h", s.gamma_h},
      {"gamma_c", s.gamma_c},
      {"gamma_e", s.gamma_e},
      {"eta_h", s.eta_h},
      {"eta_c", s.eta_c},
      {"nonlinear_ld", s.nonlinear_ld},
      {"omega_m", s.omega_m},
      {"four_level",
       {{"omega1", f.omega1},
        {"omega2", f.omega2},
        {"delta1", f.delta1},
        {"gamma0", f.gamma0},
        {"gamma1", f.gamma1},
        {"gamma2", f.gamma2},
        {"compensate_light_shift", f.compensate_light_shift}}},
      {"tickle", {{"g_t", s.tickle.g_t}, {"phase", s.tickle.phase}, {"enabled", s.tickle.enabled}}},
  };
}

SystemSpec system_from_json(const Json& j) {
  require_keys(j,
               {"be_levels", "fock_cutoff", "g_h", "g_c", "gamma_h", "gamma_c", "gamma_e", "eta_h", "eta_c",
                "nonlinear_ld", "omega_m", "four_level", "tickle"},
               "system");
  const Json& f = j["four_level"];
  const Json& t = j["tickle"];
  require_keys(f, {"omega1", "omega2", "delta1", "gamma0", "gamma1", "gamma2", "compensate_light_shift"},
               "system.four_level");
  require_keys(t, {"g_t", "phase", "enabled"}, "system.tickle");
  try {
    SystemSpec s;
    s.be_levels = j["be_levels"].get<int>();
    s.layout = SpaceLayout(j["fock_cutoff"].get<int>(), s.be_levels, 2);
    s.g_h = j["g_h"].get<double>();
    s.g_c = j["g_c"].get<double>();
    s.gamma_h = j["gamma_h"].get<double>();
    s.gamma_c = j["gamma_c"].get<double>();
    s.gamma_e = j["gamma_e"].get<double>();
    s.eta_h = j["eta_h"].get<double>();
    s.eta_c = j["eta_c"].get<double>();
    s.nonlinear_ld = j["nonlinear_ld"].get<bool>();
    s.omega_m = j["omega_m"].get<double>();
    s.four_level.omega1 = f["omega1"].get<double>();
    s.four_level.omega2 = f["omega2"].get<double>();
    s.four_level.delta1 = f["delta1"].get<double>();
    s.four_level.gamma0 = f["gamma0"].get<double>();
    s.four_level.gamma1 = f["gamma1"].get<double>();
    s.four_level.gamma2 = f["gamma2"].get<double>();
    s.four_level.compensate_light_shift = f["compensate_light_shift"].get<bool>();
    s.tickle.g_t = t["g_t"].get<double>();
    s.tickle.phase = t["phase"].get<double>();
    s.tickle.enabled = t["enabled"].get<bool>();
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
}

Json export_header(std::string_view kind, const SystemSpec& s) {
  return Json{{"schema_version", kSchemaVersion}, {"kind", kind}, {"system", system_to_json(s)}};
}

Json distribution_to_json(const PhononDistribution& d) {
  return Json{{"p", d.p},
              {"mean", d.mean},
              {"tail_mass", d.tail_mass},
              {"truncation_warning", d.truncation_warning}};
}

PhononDistribution distribution_from_json(const Json& j) {
  require_keys(j, {"p", "mean", "tail_mass", "truncation_warning"}, "phonon_distribution");
  PhononDistribution d;
  d.p = doubles(j["p"]);
  d.mean = number_from_json(j["mean"]);
  d.tail_mass = number_from_json(j["tail_mass"]);
  d.truncation_warning = j["truncation_warning"].get<bool>();
  return d;
}

Json charfun_to_json(const CharFunSamples& c) {
  std::vector<double> re, im;
  for (auto v : c.values) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return Json{{"axis_angle", c.axis_angle},
              {"quadrature_angle", c.quadrature_angle()},
              {"beta", c.grid},
              {"re", re},
              {"im", im},
              {"beyond_safe_range", c.beyond_safe_range}};
}

Json marginal_to_json(const MarginalCurve& m, std::string_view source) {
  return Json{{"source", source},
              {"quadrature_angle", m.quadrature_angle},
              {"x", m.x},
              {"density", m.density},
              {"raw_integral", m.raw_integral},
              {"raw_min", m.raw_min},
              {"ringing_warning", m.ringing_warning}};
}

Json wigner_to_json(const WignerGrid& w) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < w.values.rows(); ++r) {
    std::vector<double> row(w.values.cols());
    for (Eigen::Index c = 0; c < w.values.cols(); ++c) row[c] = w.values(r, c);
    rows.push_back(std::move(row));
  }
  return Json{{"angle", w.angle},
              {"x", w.x},
              {"p", w.p},
              {"values", std::move(rows)},
              {"boundary_ratio", w.boundary_ratio},
              {"boundary_warning", w.boundary_warning}};
}

Json diffusion_to_json(const PhaseDiffusionFit& f) {
  return Json{{"t_ms", f.t},
              {"theta_sq", f.theta_sq},
              {"rate_rad2_per_ms", f.rate},
              {"saturated", f.saturated},
              {"points_used", f.points_used}};
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text_atomic(path, j.dump(1) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version") || j["schema_version"] != kSchemaVersion) {
    throw IoError(path.string() + ": missing or unsupported schema_version");
  }
  return j;
}

}  // namespace phlaser
