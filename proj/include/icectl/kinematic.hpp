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

// Kinematic picture: Kraus maps rho -> sum_i K_i rho K_i^dagger treated as
// the controls. A map with lambda operators is a point V = (K_1; ...; K_lambda)
// of the complex Stiefel manifold {V in C^{(lambda n) x n} : V^dagger V = I}.
// The manifold carries the embedded metric <A, B> = Re Tr(A^dagger B).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "icectl/parallel.hpp"
#include "icectl/qcore.hpp"

namespace icectl {

class KrausPoint {
 public:
  /// Throws ConstraintViolation when max|V^dagger V - I| > tol.
  static KrausPoint from_operators(const std::vector<Matrix>& ops, double tol = 1e-10);
  static KrausPoint from_stacked(Matrix stacked, Eigen::Index n, double tol = 1e-10);
  /// Identity channel: K_1 = I, remaining lambda - 1 operators zero.
  static KrausPoint identity(Eigen::Index n, Eigen::Index lambda = 1);

  Eigen::Index n() const { return n_; }
  Eigen::Index lambda() const { return stacked_.rows() / n_; }
  const Matrix& stacked() const { return stacked_; }
  Matrix op(Eigen::Index i) const { return stacked_.middleRows(i * n_, n_); }
  std::vector<Matrix> operators() const;
  /// max |V^dagger V - I|.
  double constraint_error() const;

  /// Embeds into lambda + extra operators by left-multiplying V with an
  /// isometry (W kron I_n); the map itself is unchanged.
  KrausPoint dilate(Eigen::Index extra, Rng& rng) const;

 private:
  KrausPoint(Matrix stacked, Eigen::Index n) : stacked_(std::move(stacked)), n_(n) {}
  friend KrausPoint retract(const KrausPoint&, const Matrix&);
  friend KrausPoint random_stiefel(Eigen::Index, Eigen::Index, std::uint64_t);

  Matrix stacked_;
  Eigen::Index n_ = 0;
};

Matrix apply_kraus_raw(const KrausPoint& k, const Matrix& rho);
/// Output validated at `tol`.
DensityMatrix apply_kraus(const KrausPoint& k, const DensityMatrix& rho, double tol = 1e-10);

/// K_ij = sqrt(p_i) |phi_i><chi_j| for rho_f = sum_i p_i |phi_i><phi_i|; maps
/// every state to rho_f. `basis` holds the chi_j as columns (identity when
/// omitted) and must be orthonormal to 1e-10.
KrausPoint theorem1_kraus(const DensityMatrix& rho_f, const std::optional<Matrix>& basis = std::nullopt);

/// Gaussian (lambda n) x n matrix orthonormalized by QR with the phases of
/// diag(R) absorbed; deterministic in seed.
KrausPoint random_stiefel(Eigen::Index n, Eigen::Index lambda, std::uint64_t seed);

/// Q factor of QR(V + xi) with positive real diag(R).
KrausPoint retract(const KrausPoint& v, const Matrix& xi);

Matrix tangent_projection(const KrausPoint& v, const Matrix& z);
Matrix random_tangent(const KrausPoint& v, Rng& rng);
/// Re Tr(A^dagger B).
double real_inner(const Matrix& a, const Matrix& b);

/// J(V) = Tr[(sum_i K_i rho K_i^dagger) O].
double kinematic_objective(const KrausPoint& v, const DensityMatrix& rho, const Observable& o);
/// Ambient extension used by finite-difference checks; V need not be on
/// the manifold.
double kinematic_objective_ambient(const Matrix& stacked, const Matrix& rho, const Matrix& o);

/// Euclidean gradient 2 (I kron O) V rho.
Matrix euclidean_grad(const KrausPoint& v, const DensityMatrix& rho, const Observable& o);
/// G - V herm(V^dagger G).
Matrix riemannian_grad(const KrausPoint& v, const DensityMatrix& rho, const Observable& o);
/// Riemannian Hessian P(2 (I kron O) Z rho - Z herm(V^dagger G)) applied to
/// a tangent vector Z.
Matrix riemannian_hessian(const KrausPoint& v, const DensityMatrix& rho, const Observable& o, const Matrix& z);

enum class Sense { Minimize, Maximize, Stationary };
enum class CriticalKind { MinCandidate, MaxCandidate, SaddleCandidate };

std::string_view to_string(Sense s);
std::string_view to_string(CriticalKind k);

struct OptimizeSettings {
  double stat_tol = 1e-8;
  std::size_t max_iterations = 20000;
  double initial_step = 0.5;
  double armijo = 1e-4;
  double shrink = 0.5;
  /// Directions sampled for the Hessian signature (raised to the tangent
  /// dimension when smaller).
  std::size_t hessian_directions = 50;
  /// Relative threshold separating positive/negative curvature.
  double curvature_tol = 1e-6;
  /// Values within this distance of lambda_min(O) / lambda_max(O) count as
  /// global optima.
  double global_tol = 1e-5;
  std::uint64_t seed = 0;
};

struct CriticalPointReport {
  double value = 0.0;
  double gradient_norm = 0.0;
  CriticalKind classification = CriticalKind::SaddleCandidate;
  /// Value matches the global bound corresponding to the classification.
  bool global = false;
  bool converged = false;
  std::size_t iterations = 0;
  Sense sense = Sense::Minimize;
  std::optional<KrausPoint> point;

  /// A converged min/max candidate that is not global: a trap.
  bool local_extremum() const {
    return converged && classification != CriticalKind::SaddleCandidate && !global;
  }
};

struct Curvature {
  int positive = 0;
  int negative = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Signature of the Hessian quadratic form restricted to the span of random
/// tangent directions (Rayleigh-Ritz).
Curvature sample_curvature(const KrausPoint& v, const DensityMatrix& rho, const Observable& o,
                           const OptimizeSettings& s, Rng& rng);

/// Projected gradient descent (Minimize) / ascent (Maximize) with QR
/// retraction and Armijo backtracking, or damped Gauss-Newton on |grad|^2
/// (Stationary). MaxIterationsExceeded is reported through `converged`.
CriticalPointReport optimize_stiefel(const KrausPoint& v0, const DensityMatrix& rho, const Observable& o, Sense sense,
                                     const OptimizeSettings& s = {});

struct ValueCluster {
  double value = 0.0;
  std::size_t count = 0;
  std::size_t minima = 0;
  std::size_t maxima = 0;
  std::size_t saddles = 0;
  std::size_t from_stationary_runs = 0;

  bool is_saddle() const { return saddles > 0 && saddles >= minima + maxima; }
};

struct LandscapeSettings {
  std::size_t restarts = 100;
  Eigen::Index lambda = 0;  // 0 means n^2
  std::uint64_t seed = 0;
  double cluster_tol = 1e-4;
  /// Convergence threshold for the stationary (saddle-seeking) runs.
  double stationary_tol = 1e-8;
  OptimizeSettings optimizer;
  Execution exec = Execution::Parallel;
};

struct LandscapeRun {
  std::size_t id = 0;
  CriticalPointReport report;
};

struct LandscapeScan {
  std::vector<LandscapeRun> runs;
  std::vector<ValueCluster> clusters;
  double global_min = 0.0;
  double global_max = 0.0;

  std::vector<ValueCluster> saddle_clusters() const;
};

/// `restarts` descent, ascent and saddle-seeking runs from random points;
/// converged values are clustered within cluster_tol.
LandscapeScan landscape_scan(const DensityMatrix& rho, const Observable& o, const LandscapeSettings& s);

/// Columns: run, sense, iterations, value, gradient_norm, classification,
/// converged.
void write_scan_csv(std::ostream& os, const LandscapeScan& scan);

}  // namespace icectl
