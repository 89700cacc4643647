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


// Command-line front end: one subcommand per task.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phlaser/config.hpp"
#include "phlaser/error.hpp"
#include "phlaser/export.hpp"
#include "phlaser/tasks.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

int exit_code(const std::string& kind) {
  if (kind == "config") return 2;
  if (kind == "invalid-argument") return 3;
  if (kind == "solver") return 4;
  if (kind == "io") return 5;
  if (kind == "dimension") return 6;
  return kExitInternal;
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << phlaser::Json{{"error", kind}, {"message", message}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion phonon laser simulator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<int> fock_cutoff;
  bool resume = false;

  const std::pair<const char*, const char*> tasks[] = {
      {"steady", "steady state, phonon distribution and <sigma_z>"},
      {"evolve", "time evolution from the configured initial state"},
      {"sweep", "phase-diagram sweep over 1/kappa_c and 1/gamma_c"},
      {"charfun", "characteristic function and quadrature marginals"},
      {"diffusion", "phase diffusion from a coherent start"},
      {"calibrate-decay", "engineered-decay rate equations"},
      {"carrier", "carrier Rabi signal of the steady state"},
  };
  for (const auto& [name, help] : tasks) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "YAML run configuration")->required();
    sub->add_option("-o,--out", out, "output directory");
    sub->add_option("-w,--workers", workers, "worker threads (0: all cores)");
    sub->add_option("-N,--fock-cutoff", fock_cutoff, "Fock-space cutoff");
    sub->add_flag("--resume", resume, "reuse a matching sweep checkpoint");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    phlaser::RunConfig cfg = phlaser::load_config(config_path);
    cfg.task = phlaser::task_from_name(app.get_subcommands().front()->get_name());
    if (out) cfg.out_dir = *out;
    if (workers) cfg.workers = *workers;
    if (fock_cutoff && *fock_cutoff < 2) throw phlaser::ConfigError("--fock-cutoff must be >= 2");
    if (fock_cutoff) cfg.system.layout = phlaser::SpaceLayout(*fock_cutoff, cfg.system.be_levels, 2);
    if (resume) cfg.resume = true;
    cfg.validate();

    phlaser::Json files = phlaser::Json::array();
    for (const auto& p : phlaser::run_task(cfg)) files.push_back(p.string());
    std::cout << phlaser::Json{{"status", "ok"}, {"task", phlaser::task_name(cfg.task)}, {"files", files}}.dump()
              << std::endl;
    return 0;
  } catch (const phlaser::Error& e) {
    return fail(e.kind(), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitInternal);
  }
}
