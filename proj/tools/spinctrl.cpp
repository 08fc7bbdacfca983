// Copyright 2026 The spinctrl Authors
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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "spinctrl/cli.hpp"

namespace sc = spinctrl::cli;

int main(int argc, char** argv) {
  CLI::App app{"spinctrl: robust single-qubit control for exchange-coupled spin qubits"};
  app.require_subcommand(1);

  sc::RunOptions opt;
  std::uint64_t seed = 0;
  for (const auto& name : sc::commands()) {
    auto* sub = app.add_subcommand(name, "run a " + name + " config");
    sub->add_option("--config,-c", opt.config_path, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", opt.threads, "worker threads (default SPINCTRL_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--force", opt.force, "overwrite existing outputs");
  }

  auto* library = app.add_subcommand("library", "pulse library tools");
  auto* list = library->add_subcommand("list", "print the pulse library");
  std::string library_path;
  list->add_option("--file", library_path, "library JSON (default: built-in)")->check(CLI::ExistingFile);
  library->require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check configs against the schemas without running");
  std::vector<std::string> files;
  validate->add_option("configs", files, "config files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sc::kExitConfig;
  }

  if (list->parsed()) {
    try {
      sc::print_library(library_path.empty() ? spinctrl::builtin_library() : spinctrl::load_library(library_path),
                        std::cout);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return sc::kExitConfig;
    }
    return sc::kExitOk;
  }

  if (validate->parsed()) {
    int rc = sc::kExitOk;
    for (const auto& f : files) {
      try {
        const auto v = sc::validate_config(nlohmann::json::parse(sc::read_file(f)));
        if (v.empty()) {
          std::cout << f << ": ok\n";
        } else {
          sc::print_violations(f, v);
          rc = sc::kExitConfig;
        }
      } catch (const std::exception& e) {
        std::cerr << f << ": " << e.what() << "\n";
        rc = sc::kExitConfig;
      }
    }
    return rc;
  }

  for (const auto& name : sc::commands()) {
    auto* sub = app.get_subcommand(name);
    if (!sub->parsed()) continue;
    if (sub->count("--seed") > 0) opt.seed = seed;
    return sc::run(name, opt);
  }
  return sc::kExitConfig;
}
