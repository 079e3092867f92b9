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

// Scenario documents: one JSON object describing a complete control
// problem. Complex matrices are row-major nested arrays whose entries are
// [re, im] pairs (a bare number is read as a real entry).
//
// {
//   "schema": "icectl.scenario/1",
//   "seed": 7,
//   "system": {"dim": 2, "energies": [0, 1], "h_eff": M, "couplings": [M, ...]},
//   "environment": {"kind": "radiation", "grid": {...}, "dipole": M,
//                   "form_factor": {...}, "distribution": {...}},
//   "controls": {"duration": 10, "steps": 100, "coherent": [[...], ...]},
//   "initial_state": {...},
//   "objective": {"kind": "state_transfer", "target": {...}},
//   "weights": {"alpha": ..., "beta": ...},
//   "optimizer": {"ga": {...}, "landscape": {...}},
//   "theorem1": {"target": {...}, "samples": 100},
//   "output": {"record_every": 1, "elements": [[0, 1]]}
// }
//
// README.md documents every field.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "icectl/gaopt.hpp"
#include "icectl/kinematic.hpp"
#include "icectl/objectives.hpp"
#include "icectl/propagator.hpp"

namespace icectl {

inline constexpr const char* kScenarioSchema = "icectl.scenario/1";

enum class EnvironmentKind { None, Radiation, Medium };

struct Theorem1Settings {
  std::optional<DensityMatrix> target;
  std::optional<Matrix> basis;
  std::size_t samples = 100;
};

struct OutputSettings {
  std::size_t record_every = 1;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> elements;
};

struct Scenario {
  std::uint64_t seed = 0;
  Eigen::Index dim = 0;
  ControlledSystem system;
  EnvironmentKind environment = EnvironmentKind::None;
  /// Radial bins of the environment grid (densities unused).
  std::optional<RadialDistribution> grid;
  ControlSchedule schedule;
  std::optional<DensityMatrix> initial_state;
  std::optional<ObjectiveSpec> objective;
  CostWeights weights;
  std::optional<GASettings> ga;
  /// Acceptance threshold reported by the ga command; never enforced.
  std::optional<double> ga_threshold;
  std::optional<LandscapeSettings> landscape;
  Theorem1Settings theorem1;
  OutputSettings output;

  /// Fitness problem for the genetic algorithm; InvalidArgument when the
  /// scenario lacks an initial state, objective or environment grid.
  ControlProblem control_problem() const;
  /// Replaces the seed everywhere it is consumed.
  void override_seed(std::uint64_t seed);
};

/// Parses and validates a scenario document. Every validation failure is an
/// Error whose message starts with the JSON path of the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace icectl
