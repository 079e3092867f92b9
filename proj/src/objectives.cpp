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

#include "icectl/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace icectl {

MapMatchObjective make_map_objective(Superoperator target) {
  const Eigen::Index n = target.system_dim();
  if (n * n != target.matrix.rows() || target.matrix.rows() != target.matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "target map is not n^2 x n^2");
  }
  const double choi_min = min_eigenvalue(choi_matrix(target));
  if (choi_min < -1e-8) {
    throw Error(ErrorCode::ConstraintViolation, "target map is not completely positive", choi_min);
  }
  // trace preservation: Tr Phi(|i><j|) = delta_ij
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex tr = unvec(target.matrix.col(i + n * j), n).trace();
      worst = std::max(worst, std::abs(tr - Complex(i == j ? 1.0 : 0.0, 0.0)));
    }
  }
  if (worst > 1e-10) throw Error(ErrorCode::ConstraintViolation, "target map is not trace preserving", worst);
  return MapMatchObjective{std::move(target)};
}

double j1_observable(const Matrix& rho, const Observable& o) {
  if (rho.rows() != o.dim() || rho.cols() != o.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  }
  return (rho * o.matrix()).trace().real();
}

double j1_observable(const DensityMatrix& rho, const Observable& o) { return j1_observable(rho.matrix(), o); }

double j1_state(const Matrix& rho, const DensityMatrix& target) { return hs_distance(rho, target.matrix()); }

double j1_state(const DensityMatrix& rho, const DensityMatrix& target) {
  return hs_distance(rho.matrix(), target.matrix());
}

double j1_map(const Superoperator& p, const Superoperator& target) {
  if (p.convention != target.convention) {
    throw Error(ErrorCode::ConventionMismatch, "superoperators use different vectorization conventions");
  }
  return hs_distance(p.matrix, target.matrix);
}

double evaluate_objective(const ObjectiveSpec& spec, const Trajectory& traj) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ObservableObjective>) {
          return j1_observable(traj.final_state, s.observable);
        } else if constexpr (std::is_same_v<T, StateTransferObjective>) {
          return j1_state(traj.final_state, s.target);
        } else {
          return j1_map(traj.final_map, s.target);
        }
      },
      spec);
}

void CostWeights::validate() const {
  for (const auto& channel : alpha) {
    for (double a : channel) {
      if (!(a >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha weights must be non-negative", a);
    }
  }
  for (double b : beta) {
    if (!(b >= 0.0)) throw Error(ErrorCode::InvalidArgument, "beta weights must be non-negative", b);
  }
}

double j2_cost(const ControlSchedule& sched, const CostWeights& w) {
  w.validate();
  double field = 0.0;
  if (!w.alpha.empty()) {
    if (w.alpha.size() != sched.coherent.size()) {
      throw Error(ErrorCode::GridMismatch, "alpha has a different number of channels than the schedule");
    }
    for (std::size_t l = 0; l < sched.coherent.size(); ++l) {
      if (w.alpha[l].size() != sched.intervals() || sched.coherent[l].size() != sched.intervals()) {
        throw Error(ErrorCode::GridMismatch, "alpha for channel " + std::to_string(l) + " is off the time grid");
      }
      for (std::size_t k = 0; k < sched.intervals(); ++k) {
        const double u = sched.coherent[l][k];
        field += w.alpha[l][k] * u * u * (sched.times[k + 1] - sched.times[k]);
      }
    }
  }
  double medium = 0.0;
  if (!w.beta.empty()) {
    for (const auto& n : sched.environment) {
      if (n.bins() != w.beta.size()) throw Error(ErrorCode::GridMismatch, "beta is off the radial grid");
      medium = std::max(medium, n.weighted_total(w.beta));
    }
  }
  return field + medium;
}

PerformanceIndex performance_index(double j1, double j2) { return {j1, j2, j1 + j2}; }

}  // namespace icectl
