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
#include <string>
#include <string_view>

#include <json.hpp>

#include "phlaser/ion_models.hpp"
#include "phlaser/lindblad.hpp"
#include "phlaser/phase_space.hpp"

namespace phlaser {

using Json = nlohmann::json;

/// Version stamped into every exported file as `schema_version`.
inline constexpr int kSchemaVersion = 1;

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_double(double v);

/// Doubles that may be non-finite are stored as strings in JSON.
Json number_to_json(double v);
double number_from_json(const Json& j);

/// Resolved SystemSpec in rad/ms and 1/ms, the same field names as the
/// canonical config.
Json system_to_json(const SystemSpec& s);
/// Throws ConfigError on missing or unknown fields.
SystemSpec system_from_json(const Json& j);

/// {schema_version, kind, system}.
Json export_header(std::string_view kind, const SystemSpec& s);

Json distribution_to_json(const PhononDistribution& d);
PhononDistribution distribution_from_json(const Json& j);
Json charfun_to_json(const CharFunSamples& c);
Json marginal_to_json(const MarginalCurve& m, std::string_view source);
Json wigner_to_json(const WignerGrid& w);
Json diffusion_to_json(const PhaseDiffusionFit& f);

/// Writes via a temporary file and rename. Throws IoError.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const Json& j);
/// Parses a JSON export and checks its schema_version. Throws IoError.
Json read_json(const std::filesystem::path& path);

}  // namespace phlaser
