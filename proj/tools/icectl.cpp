// Copyright 2026 The icectl Authors
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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "icectl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"icectl: coherent and incoherent control of open quantum systems"};
  app.require_subcommand(1);

  icectl::CommandOptions opts;
  std::uint64_t seed = 0;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", opts.scenario, "Scenario JSON document")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_flag("--quiet", opts.quiet, "Suppress the summary on stdout");
    return sub;
  };
  add("propagate", "Propagate the initial state and write the trajectory");
  add("ga", "Optimize the environment distribution with the genetic algorithm");
  add("landscape", "Scan critical values of the kinematic objective");
  add("theorem1", "Verify the all-to-one Kraus construction on random states");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : icectl::kExitValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen->count("--seed") > 0) opts.seed = seed;
  return icectl::run_command(chosen->get_name(), opts, std::cout, std::cerr);
}
