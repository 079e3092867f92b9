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

// Controlled master equation
//
//   d rho / dt = -i [H0 + H_eff + sum_l Q_l u_l(t), rho] + L[n(t)] rho
//
// with piecewise-constant coherent controls u_l and environment
// distributions n. On each interval the generator is constant and the step
// map is exp(dt * Liouvillian).
//
// Superoperators act on vec(rho) in column-stacking order:
// vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "icectl/generators.hpp"
#include "icectl/parallel.hpp"
#include "icectl/qcore.hpp"

namespace icectl {

enum class Vectorization { ColumnStacking, RowStacking };

struct Superoperator {
  Matrix matrix;
  Vectorization convention = Vectorization::ColumnStacking;

  Eigen::Index system_dim() const;
};

Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index n);
Matrix apply_superoperator(const Superoperator& s, const Matrix& rho);

/// Choi matrix sum_{ij} |i><j| kron Phi(|i><j|) of a column-stacked map.
Matrix choi_matrix(const Superoperator& s);

/// Liouvillian of rho -> -i[H, rho] + D(rho). The parallel kernel fills the
/// n^2 x n^2 matrix entry by entry; the serial reference assembles it from
/// Kronecker products. Both agree to round-off.
Matrix liouvillian(const Matrix& h, const DissipatorSpec& d, Execution exec = Execution::Parallel);
Matrix liouvillian_reference(const Matrix& h, const DissipatorSpec& d);

struct NoEnvironment {};

struct RadiationEnvironment {
  TransitionDecomposition transitions;
  FormFactor form_factor = FormFactor::flat(1.0);
};

struct MediumEnvironment {
  TransitionStructure structure;
  MediumCoupling coupling;
};

using EnvironmentModel = std::variant<NoEnvironment, RadiationEnvironment, MediumEnvironment>;

DissipatorSpec build_dissipator(const EnvironmentModel& env, const RadialDistribution& n, Eigen::Index dim);

struct ControlledSystem {
  Matrix h0;
  Matrix h_eff;                    // empty means zero
  std::vector<Matrix> couplings;   // Q_l, one per coherent channel
  EnvironmentModel environment = NoEnvironment{};

  Eigen::Index dim() const { return h0.rows(); }
  /// Throws DimensionMismatch / NotHermitian on inconsistent data.
  void validate() const;
};

/// Zero-order-hold controls on times t_0 = 0 < t_1 < ... < t_M.
struct ControlSchedule {
  std::vector<double> times;
  std::vector<std::vector<double>> coherent;  // [channel][interval]
  /// Empty (no environment), one entry (static) or one per interval.
  std::vector<RadialDistribution> environment;

  std::size_t intervals() const { return times.empty() ? 0 : times.size() - 1; }
  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
  const RadialDistribution* distribution(std::size_t interval) const;
  void validate(std::size_t channels) const;

  /// Uniform grid of `steps` intervals on [0, T].
  static std::vector<double> uniform_times(double duration, std::size_t steps);
  /// Intervals [from, to) of this schedule with times shifted to start at 0.
  ControlSchedule slice(std::size_t from, std::size_t to) const;
};

struct PropagateOptions {
  /// Record every k-th grid instant (0 disables state recording; the first
  /// and last instants are always kept when recording).
  std::size_t record_every = 1;
  /// Tolerance used to validate recorded states.
  double state_tol = 1e-8;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  Superoperator final_map;
  Matrix final_state;
};

/// Generator of interval `k` (Hamiltonian plus dissipator).
Matrix interval_generator(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t k);

/// StepFailure (magnitude = interval index) if an exponential is not finite.
Trajectory propagate(const DensityMatrix& rho0, const ControlledSystem& sys, const ControlSchedule& sched,
                     const PropagateOptions& opts = {});

/// Map of intervals [from, to) (identity when from == to).
Superoperator propagation_map(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t from,
                              std::size_t to);

/// Final state only; skips map accumulation and recording.
Matrix final_state(const DensityMatrix& rho0, const ControlledSystem& sys, const ControlSchedule& sched);

/// P(0 -> T) == P(tau -> T) P(0 -> tau) for tau = times[split].
bool compose_check(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t split,
                   double tol = 1e-10);

struct TrajectoryCsvOptions {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> elements;  // Re/Im columns
  std::optional<DensityMatrix> target;
};

/// Columns: t, re_ij/im_ij for each selected element, p_0..p_{n-1}, and
/// distance_to_target when a target is set. 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const TrajectoryCsvOptions& opts = {});

}  // namespace icectl
