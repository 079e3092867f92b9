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

#include "icectl/qcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace icectl {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceDeviation: return "TraceDeviation";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FrequencyOutOfBand: return "FrequencyOutOfBand";
    case ErrorCode::MissingAmplitude: return "MissingAmplitude";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::BasisNotOrthonormal: return "BasisNotOrthonormal";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// Re-express each eigenspace in a canonical basis: Gram-Schmidt over the
// projections of e_0, e_1, ... taken in coordinate order. Each resulting
// vector has a real positive component on the coordinate that produced it,
// which also fixes the phase of non-degenerate eigenvectors.
void canonicalize_eigenspaces(RealVector& values, Matrix& vectors) {
  const Eigen::Index n = values.size();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double group_tol = 1e-10 * scale;
  constexpr std::array<double, 3> kAcceptThresholds = {0.1, 1e-4, 1e-9};

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values(stop) - values(stop - 1) <= group_tol) ++stop;
    const Eigen::Index k = stop - start;

    const Matrix block = vectors.middleCols(start, k);
    const Matrix projector = block * block.adjoint();
    std::vector<Vector> chosen;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (double threshold : kAcceptThresholds) {
      for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(chosen.size()) < k; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        Vector v = projector.col(j);
        for (const auto& c : chosen) v -= c * c.dot(v);
        const double norm = v.norm();
        if (norm > threshold) {
          // second pass keeps orthogonality at working precision
          for (const auto& c : chosen) v -= c * c.dot(v);
          chosen.push_back(v / v.norm());
          used[static_cast<std::size_t>(j)] = true;
        }
      }
      if (static_cast<Eigen::Index>(chosen.size()) == k) break;
    }
    if (static_cast<Eigen::Index>(chosen.size()) == k) {
      for (Eigen::Index c = 0; c < k; ++c) vectors.col(start + c) = chosen[static_cast<std::size_t>(c)];
    }
    // If the pass failed (cannot happen for an orthonormal input block) the
    // solver's basis is kept as is.
    start = stop;
  }
  // average eigenvalues inside a cluster so degenerate values compare equal
  start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && values(stop) - values(stop - 1) <= group_tol) ++stop;
    const double mean = values.segment(start, stop - start).mean();
    values.segment(start, stop - start).setConstant(mean);
    start = stop;
  }
}

}  // namespace

double hermiticity_error(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(hermitian), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "eigenvalue solver did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

DensityMatrix validate_state(const Matrix& m, const StateTolerance& tol) {
  require_square(m, "density matrix");
  const double herm = hermiticity_error(m);
  if (herm > tol.hermitian) {
    std::ostringstream os;
    os << "max |rho - rho^dagger| = " << herm << " exceeds " << tol.hermitian;
    throw Error(ErrorCode::NotHermitian, os.str(), herm);
  }
  const double deviation = std::abs(m.trace() - Complex(1.0, 0.0));
  if (deviation > tol.trace) {
    std::ostringstream os;
    os << "|Tr rho - 1| = " << deviation << " exceeds " << tol.trace;
    throw Error(ErrorCode::TraceDeviation, os.str(), deviation);
  }
  const double lambda_min = min_eigenvalue(m);
  if (lambda_min < -tol.eigenvalue) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lambda_min << " below -" << tol.eigenvalue;
    throw Error(ErrorCode::NegativeEigenvalue, os.str(), lambda_min);
  }
  return DensityMatrix(m);
}

DensityMatrix validate_state(const Matrix& m, double tol) {
  return validate_state(m, StateTolerance{tol, tol, tol});
}

Observable make_observable(const Matrix& m, double tol) {
  require_square(m, "observable");
  const double herm = hermiticity_error(m);
  if (herm > tol) {
    std::ostringstream os;
    os << "max |A - A^dagger| = " << herm << " exceeds " << tol;
    throw Error(ErrorCode::NotHermitian, os.str(), herm);
  }
  return Observable(m);
}

double hs_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << "hs_distance of " << a.rows() << "x" << a.cols() << " and " << b.rows() << "x" << b.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  return (a - b).norm();
}

Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Matrix pauli_y() {
  Matrix s(2, 2);
  s << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return s;
}

Matrix pauli_z() {
  Matrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "Bloch vector requires a qubit state, got dimension " + std::to_string(rho.dim()));
  }
  const Matrix& r = rho.matrix();
  BlochVector b;
  b.w(0) = (r * pauli_x()).trace().real();
  b.w(1) = (r * pauli_y()).trace().real();
  b.w(2) = (r * pauli_z()).trace().real();
  return b;
}

DensityMatrix state_from_bloch(const Eigen::Vector3d& w) {
  const Matrix r = 0.5 * (Matrix::Identity(2, 2) + w(0) * pauli_x() + w(1) * pauli_y() + w(2) * pauli_z());
  return validate_state(r);
}

EigenDecomposition spectral_hermitian(const Matrix& a) {
  require_square(a, "spectral input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "eigenvalue solver did not converge");
  }
  EigenDecomposition d{solver.eigenvalues(), solver.eigenvectors()};
  canonicalize_eigenspaces(d.values, d.vectors);
  return d;
}

EigenDecomposition spectral(const Observable& a) { return spectral_hermitian(a.matrix()); }

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // column-major fill, real part first: part of the seed-determinism contract
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  const Matrix g = random_ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // absorb the phases of diag(R) so the distribution is Haar
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

Observable random_observable(Eigen::Index n, Rng& rng) {
  const Matrix g = random_ginibre(n, n, rng);
  return make_observable(hermitian_part(g), 0.0);
}

DensityMatrix random_state(Eigen::Index n, Rng& rng, Eigen::Index rank) {
  if (rank <= 0 || rank > n) rank = n;
  const Matrix g = random_ginibre(n, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = hermitian_part(rho);
  return validate_state(rho);
}

DensityMatrix pure_state(const Vector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "zero state vector");
  const Vector v = psi / norm;
  return validate_state(v * v.adjoint());
}

DensityMatrix basis_state(Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k >= n) throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
  Matrix m = Matrix::Zero(n, n);
  m(k, k) = 1.0;
  return validate_state(m);
}

DensityMatrix maximally_mixed(Eigen::Index n) {
  return validate_state(Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix diagonal_state(const RealVector& populations) {
  const Matrix m = populations.cast<Complex>().asDiagonal();
  return validate_state(m);
}

}  // namespace icectl
