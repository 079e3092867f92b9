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

#include <variant>
#include <vector>

#include "icectl/propagator.hpp"
#include "icectl/qcore.hpp"

namespace icectl {

struct ObservableObjective {
  Observable observable;
};

struct StateTransferObjective {
  DensityMatrix target;
};

struct MapMatchObjective {
  Superoperator target;
};

using ObjectiveSpec = std::variant<ObservableObjective, StateTransferObjective, MapMatchObjective>;

/// Checks that `target` is completely positive (Choi lambda_min >= -1e-8)
/// and trace preserving (to 1e-10); throws ConstraintViolation otherwise.
MapMatchObjective make_map_objective(Superoperator target);

/// Tr[rho O].
double j1_observable(const DensityMatrix& rho, const Observable& o);
double j1_observable(const Matrix& rho, const Observable& o);
/// Hilbert-Schmidt distance to the target state.
double j1_state(const DensityMatrix& rho, const DensityMatrix& target);
double j1_state(const Matrix& rho, const DensityMatrix& target);
/// Frobenius norm of the difference of the two superoperator matrices.
double j1_map(const Superoperator& p, const Superoperator& target);

/// Objective value of a propagated trajectory.
double evaluate_objective(const ObjectiveSpec& spec, const Trajectory& traj);

/// Penalty weights: alpha[l][k] per channel and interval, beta[b] per
/// radial bin. Empty alpha / beta mean no penalty for that part.
struct CostWeights {
  std::vector<std::vector<double>> alpha;
  std::vector<double> beta;

  void validate() const;
};

/// sum_l sum_k alpha_lk |u_lk|^2 dt_k + max_k 4 pi sum_b k_b^2 beta_b n_kb dk_b.
double j2_cost(const ControlSchedule& sched, const CostWeights& w);

struct PerformanceIndex {
  double j1 = 0.0;
  double j2 = 0.0;
  double total = 0.0;
};

PerformanceIndex performance_index(double j1, double j2);

}  // namespace icectl
