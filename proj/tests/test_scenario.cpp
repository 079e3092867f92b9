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

#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "icectl/scenario.hpp"
#include "support.hpp"

using namespace icectl;
using json = nlohmann::json;

namespace {

json qubit_radiation() {
  return json::parse(R"({
    "schema": "icectl.scenario/1",
    "seed": 3,
    "system": {"dim": 2, "energies": [0.0, 1.0], "couplings": [[[0, [0, -1]], [[0, 1], 0]]]},
    "controls": {"duration": 2.0, "steps": 4, "coherent": [[0.1, 0.2, 0.3, 0.4]]},
    "environment": {
      "kind": "radiation",
      "dipole": [[0, 1], [1, 0]],
      "form_factor": {"g0": 0.2},
      "grid": {"k_min": 0.0, "k_max": 2.0, "bins": 15},
      "distribution": {"kind": "planck", "temperature": 0.5}
    },
    "initial_state": {"bloch": [0.0, 0.0, 0.5]},
    "objective": {"kind": "state_transfer", "target": {"basis": 0}},
    "weights": {"alpha": 2.0, "beta": 1.0},
    "optimizer": {"ga": {"pop_size": 10, "generations": 5, "threshold": 0.1}},
    "output": {"record_every": 2, "elements": [[0, 1]]}
  })");
}

// Error message of parsing `doc`, or empty when it parses.
std::string error_of(const json& doc, ErrorCode* code = nullptr) {
  try {
    parse_scenario(doc.dump());
  } catch (const Error& e) {
    if (code) *code = e.code();
    return e.what();
  }
  return {};
}

bool mentions(const std::string& what, const std::string& needle) { return what.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("a complete document") {
    const Scenario s = parse_scenario(qubit_radiation().dump());
    CHECK(s.seed == 3);
    CHECK(s.dim == 2);
    CHECK(s.environment == EnvironmentKind::Radiation);
    REQUIRE(s.system.couplings.size() == 1);
    CHECK((s.system.couplings[0] - pauli_y()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.schedule.times.size() == 5);
    CHECK(s.schedule.times.back() == doctest::Approx(2.0));
    CHECK(s.schedule.coherent[0][2] == 0.3);
    REQUIRE(s.schedule.environment.size() == 1);
    CHECK(s.schedule.environment[0].bins() == 15);
    CHECK(s.schedule.environment[0] == planck(0.5, RadialDistribution::uniform(0.0, 2.0, 15)));
    REQUIRE(s.initial_state);
    CHECK(s.initial_state->matrix()(0, 0).real() == doctest::Approx(0.75));
    CHECK(s.weights.alpha[0] == std::vector<double>(4, 2.0));
    CHECK(s.weights.beta.size() == 15);
    REQUIRE(s.ga);
    CHECK(s.ga->pop_size == 10);
    CHECK(s.ga->seed == 3);
    CHECK(s.ga_threshold == 0.1);
    CHECK(s.output.record_every == 2);

    const ControlProblem p = s.control_problem();
    CHECK(p.schedule.environment[0].total_density() == 0.0);
    CHECK(p.bins.bins() == 15);

    Scenario t = s;
    t.override_seed(9);
    CHECK(t.ga->seed == 9);
  }

  TEST_CASE("state, grid and distribution forms") {
    json doc = qubit_radiation();
    doc["initial_state"] = {{"pure", {json::array({0.6, 0.0}), json::array({0.0, 0.8})}}};
    Scenario s = parse_scenario(doc.dump());
    CHECK(s.initial_state->matrix()(1, 1).real() == doctest::Approx(0.64));
    CHECK(std::abs(s.initial_state->matrix()(0, 1) - Complex(0.0, -0.48)) < 1e-15);

    doc["initial_state"] = {{"maximally_mixed", true}};
    CHECK(parse_scenario(doc.dump()).initial_state->matrix()(0, 0).real() == 0.5);

    doc["environment"]["grid"] = {{"edges", {0.0, 0.5, 1.5, 2.0}}};
    doc["environment"]["distribution"] = {{"kind", "table"}, {"density", {0.1, 0.2, 0.3}}};
    s = parse_scenario(doc.dump());
    CHECK(s.schedule.environment[0].density() == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(s.schedule.environment[0].grid()[1] == 1.0);

    doc["environment"]["distribution"] = json::array();
    for (int k = 0; k < 4; ++k) doc["environment"]["distribution"].push_back({{"kind", "constant"}, {"value", 0.1 * k}});
    s = parse_scenario(doc.dump());
    REQUIRE(s.schedule.environment.size() == 4);
    CHECK(s.schedule.environment[3].density()[0] == doctest::Approx(0.3));
  }

  TEST_CASE("medium and map objectives") {
    json doc = qubit_radiation();
    doc["environment"] = {{"kind", "medium"},
                          {"mass", 2.0},
                          {"amplitudes", {{0.0, 0.1}, {0.1, 0.0}}},
                          {"grid", {{"k_min", 0.0}, {"k_max", 10.0}, {"bins", 40}}},
                          {"distribution", {{"kind", "boltzmann"}, {"beta", 1.0}, {"n_total", 0.5}}}};
    doc["objective"] = {{"kind", "map_match"}, {"unitary", {{0, 1}, {1, 0}}}};
    const Scenario s = parse_scenario(doc.dump());
    CHECK(s.environment == EnvironmentKind::Medium);
    CHECK(s.schedule.environment[0].total_density() == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(std::holds_alternative<MapMatchObjective>(*s.objective));
    CHECK(testing::code_of([&] { s.control_problem(); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("validation errors carry the field path") {
    ErrorCode code{};
    json doc = qubit_radiation();
    doc["schema"] = "icectl.scenario/0";
    CHECK(mentions(error_of(doc), "schema: unsupported schema"));

    doc = qubit_radiation();
    doc["system"]["energies"] = {0.0, 1.0, 2.0};
    CHECK(mentions(error_of(doc, &code), "system.energies: expected 2 energies"));
    CHECK(code == ErrorCode::DimensionMismatch);

    doc = qubit_radiation();
    doc["environment"]["dipole"][0][1] = 2.0;
    CHECK(mentions(error_of(doc, &code), "environment.dipole"));
    CHECK(code == ErrorCode::NotHermitian);

    doc = qubit_radiation();
    doc["environment"]["distribution"]["temperature"] = -1.0;
    CHECK(mentions(error_of(doc, &code), "environment.distribution"));
    CHECK(code == ErrorCode::NonPositiveTemperature);

    doc = qubit_radiation();
    doc["controls"]["coherent"][0] = {0.1, 0.2};
    CHECK(mentions(error_of(doc, &code), "controls.coherent[0]: expected 4 interval values"));
    CHECK(code == ErrorCode::GridMismatch);

    doc = qubit_radiation();
    doc["initial_state"] = {{"diag", {0.7, 0.7}}};
    CHECK(mentions(error_of(doc, &code), "initial_state.diag"));
    CHECK(code == ErrorCode::TraceDeviation);

    doc = qubit_radiation();
    doc["initial_state"] = {{"basis", 0}, {"diag", {1.0, 0.0}}};
    CHECK(mentions(error_of(doc), "initial_state: give exactly one of"));

    doc = qubit_radiation();
    doc["optimizer"]["ga"]["elitism"] = 20;
    CHECK(mentions(error_of(doc), "optimizer.ga: elitism"));

    doc = qubit_radiation();
    doc["optimizer"]["ga"]["pop_size"] = -3;
    CHECK(mentions(error_of(doc), "optimizer.ga.pop_size: expected a non-negative integer"));

    doc = qubit_radiation();
    doc["environment"]["kind"] = "plasma";
    CHECK(mentions(error_of(doc), "environment.kind: unknown environment kind 'plasma'"));

    doc = qubit_radiation();
    doc["system"].erase("dim");
    CHECK(mentions(error_of(doc), "system.dim: missing required field"));

    doc = qubit_radiation();
    doc["output"]["elements"] = {{0, 2}};
    CHECK(mentions(error_of(doc), "output.elements[0]: index outside"));

    CHECK(testing::code_of([] { parse_scenario("{not json"); }) == ErrorCode::InvalidArgument);
    CHECK(testing::code_of([] { load_scenario("/nonexistent/scenario.json"); }) == ErrorCode::InvalidArgument);
  }
}
