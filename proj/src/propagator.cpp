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

#include "icectl/propagator.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace icectl {

Eigen::Index Superoperator::system_dim() const {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
  return n;
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "vector length is not n^2");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix apply_superoperator(const Superoperator& s, const Matrix& rho) {
  if (s.convention != Vectorization::ColumnStacking) {
    throw Error(ErrorCode::ConventionMismatch, "only column-stacked superoperators can be applied");
  }
  if (s.matrix.rows() != rho.size() || s.matrix.cols() != rho.size()) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator and operator sizes differ");
  }
  return unvec(s.matrix * vec(rho), rho.rows());
}

Matrix choi_matrix(const Superoperator& s) {
  if (s.convention != Vectorization::ColumnStacking) {
    throw Error(ErrorCode::ConventionMismatch, "Choi reshuffling is defined for column stacking");
  }
  const Eigen::Index n = s.system_dim();
  if (n * n != s.matrix.rows() || s.matrix.rows() != s.matrix.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "superoperator is not n^2 x n^2");
  }
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // Phi(|i><j|) is column i + n j of the column-stacked map
      const Matrix image = unvec(s.matrix.col(i + n * j), n);
      choi.block(i * n, j * n, n, n) = image;
    }
  }
  return choi;
}

DissipatorSpec build_dissipator(const EnvironmentModel& env, const RadialDistribution& n, Eigen::Index dim) {
  return std::visit(
      [&](const auto& e) -> DissipatorSpec {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, NoEnvironment>) {
          DissipatorSpec d;
          d.dim = dim;
          return d;
        } else if constexpr (std::is_same_v<T, RadiationEnvironment>) {
          return radiation_generator(e.transitions, n, e.form_factor);
        } else {
          return medium_generator(e.structure, n, e.coupling);
        }
      },
      env);
}

void ControlledSystem::validate() const {
  const Eigen::Index n = dim();
  if (n == 0 || h0.rows() != h0.cols()) throw Error(ErrorCode::DimensionMismatch, "H0 must be non-empty and square");
  make_observable(h0);
  if (h_eff.size() != 0) {
    if (h_eff.rows() != n || h_eff.cols() != n) throw Error(ErrorCode::DimensionMismatch, "H_eff dimension differs from H0");
    make_observable(h_eff);
  }
  for (const auto& q : couplings) {
    if (q.rows() != n || q.cols() != n) throw Error(ErrorCode::DimensionMismatch, "coupling operator dimension differs from H0");
    make_observable(q);
  }
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, RadiationEnvironment>) {
          if (e.transitions.dim() != n) throw Error(ErrorCode::DimensionMismatch, "dipole decomposition dimension differs from H0");
        } else if constexpr (std::is_same_v<T, MediumEnvironment>) {
          if (e.structure.dim() != n) throw Error(ErrorCode::DimensionMismatch, "medium transition structure dimension differs from H0");
        }
      },
      environment);
}

const RadialDistribution* ControlSchedule::distribution(std::size_t interval) const {
  if (environment.empty()) return nullptr;
  if (environment.size() == 1) return &environment.front();
  return &environment.at(interval);
}

void ControlSchedule::validate(std::size_t channels) const {
  if (times.size() < 2) throw Error(ErrorCode::GridMismatch, "time grid needs at least two instants");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw Error(ErrorCode::GridMismatch, "time grid must be strictly increasing");
  }
  if (coherent.size() != channels) {
    std::ostringstream os;
    os << "schedule has " << coherent.size() << " coherent channels, system has " << channels;
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  const std::size_t m = intervals();
  for (std::size_t l = 0; l < coherent.size(); ++l) {
    if (coherent[l].size() != m) {
      std::ostringstream os;
      os << "coherent channel " << l << " has " << coherent[l].size() << " values for " << m << " intervals";
      throw Error(ErrorCode::LengthMismatch, os.str());
    }
  }
  if (environment.size() > 1 && environment.size() != m) {
    throw Error(ErrorCode::LengthMismatch, "environment needs one distribution or one per interval");
  }
}

std::vector<double> ControlSchedule::uniform_times(double duration, std::size_t steps) {
  if (steps == 0 || !(duration > 0.0)) throw Error(ErrorCode::InvalidArgument, "uniform grid needs T > 0 and steps > 0");
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = duration * static_cast<double>(i) / static_cast<double>(steps);
  t.back() = duration;
  return t;
}

ControlSchedule ControlSchedule::slice(std::size_t from, std::size_t to) const {
  if (from > to || to > intervals()) throw Error(ErrorCode::InvalidArgument, "slice outside the schedule");
  ControlSchedule s;
  const double t0 = times[from];
  for (std::size_t i = from; i <= to; ++i) s.times.push_back(times[i] - t0);
  for (const auto& c : coherent) s.coherent.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(from), c.begin() + static_cast<std::ptrdiff_t>(to));
  if (environment.size() <= 1) {
    s.environment = environment;
  } else {
    s.environment.assign(environment.begin() + static_cast<std::ptrdiff_t>(from), environment.begin() + static_cast<std::ptrdiff_t>(to));
  }
  return s;
}

namespace {

void check_inputs(const ControlledSystem& sys, const ControlSchedule& sched) {
  sys.validate();
  sched.validate(sys.couplings.size());
  if (!std::holds_alternative<NoEnvironment>(sys.environment) && sched.environment.empty()) {
    throw Error(ErrorCode::GridMismatch, "environment model set but the schedule carries no distribution");
  }
}

Matrix hamiltonian(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t k) {
  Matrix h = sys.h0;
  if (sys.h_eff.size() != 0) h += sys.h_eff;
  for (std::size_t l = 0; l < sys.couplings.size(); ++l) h += sched.coherent[l][k] * sys.couplings[l];
  return h;
}

// Walks the intervals, rebuilding the dissipator only when the distribution
// changes and the exponential only when generator or step length change.
class StepMaps {
 public:
  StepMaps(const ControlledSystem& sys, const ControlSchedule& sched) : sys_(sys), sched_(sched) {}

  const Matrix& step(std::size_t k) {
    const RadialDistribution* dist = sched_.distribution(k);
    if (!have_dissipator_ || dist != dist_) {
      dissipator_ = dist ? build_dissipator(sys_.environment, *dist, sys_.dim()) : DissipatorSpec{sys_.dim(), {}};
      dist_ = dist;
      have_dissipator_ = true;
    }
    Matrix gen = liouvillian(hamiltonian(sys_, sched_, k), dissipator_);
    const double dt = sched_.times[k + 1] - sched_.times[k];
    if (have_step_ && dt == dt_ && gen == generator_) return step_;
    if (!gen.allFinite()) {
      throw Error(ErrorCode::StepFailure, "non-finite generator on interval " + std::to_string(k), static_cast<double>(k));
    }
    Matrix scaled = gen * dt;
    step_ = scaled.exp();
    if (!step_.allFinite()) {
      throw Error(ErrorCode::StepFailure, "matrix exponential failed on interval " + std::to_string(k), static_cast<double>(k));
    }
    generator_ = std::move(gen);
    dt_ = dt;
    have_step_ = true;
    return step_;
  }

  Matrix generator(std::size_t k) {
    const RadialDistribution* dist = sched_.distribution(k);
    const DissipatorSpec d = dist ? build_dissipator(sys_.environment, *dist, sys_.dim()) : DissipatorSpec{sys_.dim(), {}};
    return liouvillian(hamiltonian(sys_, sched_, k), d);
  }

 private:
  const ControlledSystem& sys_;
  const ControlSchedule& sched_;
  const RadialDistribution* dist_ = nullptr;
  bool have_dissipator_ = false;
  DissipatorSpec dissipator_;
  bool have_step_ = false;
  double dt_ = 0.0;
  Matrix generator_;
  Matrix step_;
};

}  // namespace

Matrix interval_generator(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t k) {
  check_inputs(sys, sched);
  if (k >= sched.intervals()) throw Error(ErrorCode::InvalidArgument, "interval index out of range");
  return StepMaps(sys, sched).generator(k);
}

Trajectory propagate(const DensityMatrix& rho0, const ControlledSystem& sys, const ControlSchedule& sched,
                     const PropagateOptions& opts) {
  check_inputs(sys, sched);
  const Eigen::Index n = sys.dim();
  if (rho0.dim() != n) throw Error(ErrorCode::DimensionMismatch, "initial state dimension differs from H0");

  Trajectory traj;
  const std::size_t m = sched.intervals();
  const auto record = [&](std::size_t idx, const Vector& v) {
    if (opts.record_every == 0) return;
    if (idx % opts.record_every != 0 && idx != m) return;
    traj.times.push_back(sched.times[idx]);
    traj.states.push_back(validate_state(unvec(v, n), opts.state_tol));
  };

  StepMaps steps(sys, sched);
  Matrix total = Matrix::Identity(n * n, n * n);
  Vector state = vec(rho0.matrix());
  record(0, state);
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix& s = steps.step(k);
    total = s * total;
    state = s * state;
    record(k + 1, state);
  }
  traj.final_map = Superoperator{std::move(total), Vectorization::ColumnStacking};
  traj.final_state = unvec(state, n);
  return traj;
}

Superoperator propagation_map(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t from,
                              std::size_t to) {
  check_inputs(sys, sched);
  if (from > to || to > sched.intervals()) throw Error(ErrorCode::InvalidArgument, "map range outside the schedule");
  const Eigen::Index n2 = sys.dim() * sys.dim();
  StepMaps steps(sys, sched);
  Matrix total = Matrix::Identity(n2, n2);
  for (std::size_t k = from; k < to; ++k) total = steps.step(k) * total;
  return Superoperator{std::move(total), Vectorization::ColumnStacking};
}

Matrix final_state(const DensityMatrix& rho0, const ControlledSystem& sys, const ControlSchedule& sched) {
  check_inputs(sys, sched);
  if (rho0.dim() != sys.dim()) throw Error(ErrorCode::DimensionMismatch, "initial state dimension differs from H0");
  StepMaps steps(sys, sched);
  Vector state = vec(rho0.matrix());
  for (std::size_t k = 0; k < sched.intervals(); ++k) state = steps.step(k) * state;
  return unvec(state, sys.dim());
}

bool compose_check(const ControlledSystem& sys, const ControlSchedule& sched, std::size_t split, double tol) {
  const std::size_t m = sched.intervals();
  if (split > m) throw Error(ErrorCode::InvalidArgument, "split point outside the schedule");
  const Matrix full = propagation_map(sys, sched, 0, m).matrix;
  const Matrix first = propagation_map(sys, sched, 0, split).matrix;
  const Matrix second = propagation_map(sys, sched, split, m).matrix;
  return (second * first - full).cwiseAbs().maxCoeff() <= tol;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const TrajectoryCsvOptions& opts) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().dim();
  os << "t";
  for (const auto& [i, j] : opts.elements) os << ",re_" << i << "_" << j << ",im_" << i << "_" << j;
  for (Eigen::Index k = 0; k < n; ++k) os << ",p_" << k;
  if (opts.target) os << ",distance_to_target";
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const Matrix& r = traj.states[s].matrix();
    os << traj.times[s];
    for (const auto& [i, j] : opts.elements) os << ',' << r(i, j).real() << ',' << r(i, j).imag();
    for (Eigen::Index k = 0; k < n; ++k) os << ',' << r(k, k).real();
    if (opts.target) os << ',' << hs_distance(r, opts.target->matrix());
    os << '\n';
  }
}

}  // namespace icectl
