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

// Helpers and independent oracles shared by the unit and acceptance tests.
// Nothing here calls into the routine it is used to check.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "icectl/qcore.hpp"

namespace icectl::testing {

inline constexpr double kPi = 3.14159265358979323846;

struct Thrown {
  bool thrown = false;
  ErrorCode code = ErrorCode::InvalidArgument;
};

inline Thrown thrown_by(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return {true, e.code()};
  }
  return {};
}

inline bool throws_code(const std::function<void()>& f, ErrorCode code) {
  const Thrown t = thrown_by(f);
  return t.thrown && t.code == code;
}

/// Code of the icectl::Error thrown by f; fails the test when none is.
inline ErrorCode code_of(const std::function<void()>& f) {
  const Thrown t = thrown_by(f);
  REQUIRE_MESSAGE(t.thrown, "expected an icectl::Error");
  return t.code;
}

inline std::vector<double> sorted_eigenvalues(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (hermitian + hermitian.adjoint()));
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

/// Textbook GKSL action of one jump operator with the anticommutator
/// weight written out: rate (s L rho L^dag - a (L^dag L rho + rho L^dag L)).
inline Matrix lindblad_term(const Matrix& l, const Matrix& rho, double s, double a) {
  const Matrix ld = l.adjoint();
  return s * (l * rho * ld) - a * (ld * l * rho + rho * ld * l);
}

/// Row-by-row Kronecker product written out with loops.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Column stacking by explicit index arithmetic.
inline Vector stack_columns(const Matrix& m) {
  Vector v(m.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) v(i + m.rows() * j) = m(i, j);
  return v;
}

inline Matrix unstack_columns(const Vector& v, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = v(i + n * j);
  return m;
}

/// Scaling-and-squaring Taylor exponential, independent of Eigen's Pade.
inline Matrix taylor_expm(const Matrix& a) {
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const Matrix x = a / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace icectl::testing
