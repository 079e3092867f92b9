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

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "icectl/error.hpp"

namespace icectl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

/// Tolerances applied by validate_state. Trace and Hermiticity are checked
/// against the raw input; positivity against the Hermitian part.
struct StateTolerance {
  double hermitian = 1e-12;
  double trace = 1e-12;
  double eigenvalue = 1e-10;
};

class DensityMatrix;
class Observable;

DensityMatrix validate_state(const Matrix& m, const StateTolerance& tol = {});
DensityMatrix validate_state(const Matrix& m, double tol);
Observable make_observable(const Matrix& m, double tol = 1e-12);

/// Positive semidefinite, unit-trace, Hermitian n x n matrix. Only
/// constructible through validate_state.
class DensityMatrix {
 public:
  Eigen::Index dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }

 private:
  explicit DensityMatrix(Matrix m) : data_(std::move(m)) {}
  friend DensityMatrix validate_state(const Matrix&, const StateTolerance&);

  Matrix data_;
};

/// Hermitian operator: observables, Hamiltonians, coupling operators.
class Observable {
 public:
  Eigen::Index dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }

 private:
  explicit Observable(Matrix m) : data_(std::move(m)) {}
  friend Observable make_observable(const Matrix&, double);

  Matrix data_;
};

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;
};

struct BlochVector {
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  double norm() const { return w.norm(); }
};

/// Hilbert-Schmidt distance sqrt(Tr[(A-B)^dagger (A-B)]).
double hs_distance(const Matrix& a, const Matrix& b);
inline double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return hs_distance(a.matrix(), b.matrix());
}

BlochVector bloch_vector(const DensityMatrix& rho);
/// rho = (I + <w, sigma>) / 2; throws NegativeEigenvalue when |w| > 1.
DensityMatrix state_from_bloch(const Eigen::Vector3d& w);

EigenDecomposition spectral(const Observable& a);
/// Same as spectral() but only requires `a` to be Hermitian to within
/// round-off; the Hermitian part is decomposed.
EigenDecomposition spectral_hermitian(const Matrix& a);

/// Largest elementwise |A - A^dagger|.
double hermiticity_error(const Matrix& a);
Matrix hermitian_part(const Matrix& a);
double min_eigenvalue(const Matrix& hermitian);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Random sampling used by property tests, scans and the CLI demos.
Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix random_unitary(Eigen::Index n, Rng& rng);
Observable random_observable(Eigen::Index n, Rng& rng);
/// Random mixed state of the given rank (0 means full rank).
DensityMatrix random_state(Eigen::Index n, Rng& rng, Eigen::Index rank = 0);
DensityMatrix pure_state(const Vector& psi);
DensityMatrix basis_state(Eigen::Index n, Eigen::Index k);
DensityMatrix maximally_mixed(Eigen::Index n);
DensityMatrix diagonal_state(const RealVector& populations);

}  // namespace icectl
