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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "icectl/scenario.hpp"

namespace icectl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

struct CommandOptions {
  std::filesystem::path scenario;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

/// trajectory.csv; prints J1, J2 and J.
void cmd_propagate(const Scenario& s, const CommandOptions& opts, std::ostream& log);
/// history.csv, best_genome.csv and trajectory.csv for the best genome.
void cmd_ga(const Scenario& s, const CommandOptions& opts, std::ostream& log);
/// scan.csv and clusters.csv.
void cmd_landscape(const Scenario& s, const CommandOptions& opts, std::ostream& log);
/// theorem1.csv with the deviation of every sampled input state.
void cmd_theorem1(const Scenario& s, const CommandOptions& opts, std::ostream& log);

/// Loads the scenario, applies the seed override and dispatches. Errors are
/// reported on `err` and mapped to exit codes (2 validation, 3 numerical).
int run_command(std::string_view name, const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace icectl
