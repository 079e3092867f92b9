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

#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icectl/propagator.hpp"

namespace icectl {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

void check_dims(const Matrix& h, const DissipatorSpec& d) {
  if (h.rows() != h.cols()) throw Error(ErrorCode::DimensionMismatch, "Hamiltonian must be square");
  if (!d.terms.empty() && d.dim != h.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "dissipator dimension " + std::to_string(d.dim) +
                                                  " differs from Hamiltonian dimension " + std::to_string(h.rows()));
  }
}

struct SandwichTerm {
  const Matrix* jump;
  double weight;
};

}  // namespace

Matrix liouvillian_reference(const Matrix& h, const DissipatorSpec& d) {
  check_dims(h, d);
  const Eigen::Index n = h.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Complex i_unit(0.0, 1.0);
  Matrix out = -i_unit * Eigen::kroneckerProduct(id, h) + i_unit * Eigen::kroneckerProduct(h.transpose(), id);
  for (const auto& t : d.terms) {
    const Matrix ldl = t.jump.adjoint() * t.jump;
    const double sandwich = t.convention == Convention::Doubled ? 2.0 * t.rate : t.rate;
    const double anti = t.convention == Convention::Doubled ? t.rate : 0.5 * t.rate;
    out += sandwich * Eigen::kroneckerProduct(t.jump.conjugate(), t.jump);
    out -= anti * Eigen::kroneckerProduct(id, ldl);
    out -= anti * Eigen::kroneckerProduct(ldl.transpose(), id);
  }
  return out;
}

// Entry (i + n j, k + n l) equals
//   G_ik delta_jl + delta_ik conj(G_jl) + sum_t s_t L_ik conj(L_jl)
// with G = -i H - sum_t a_t L_t^dagger L_t.
Matrix liouvillian(const Matrix& h, const DissipatorSpec& d, Execution exec) {
  check_dims(h, d);
  const Eigen::Index n = h.rows();
  const Eigen::Index n2 = n * n;

  Matrix g = Complex(0.0, -1.0) * h;
  std::vector<SandwichTerm> sandwiches;
  sandwiches.reserve(d.terms.size());
  for (const auto& t : d.terms) {
    const double sandwich = t.convention == Convention::Doubled ? 2.0 * t.rate : t.rate;
    const double anti = t.convention == Convention::Doubled ? t.rate : 0.5 * t.rate;
    g.noalias() -= anti * (t.jump.adjoint() * t.jump);
    sandwiches.push_back({&t.jump, sandwich});
  }
  const Matrix g_conj = g.conjugate();

  Matrix out(n2, n2);
  const auto fill_row = [&](Eigen::Index row) {
    const Eigen::Index i = row % n;
    const Eigen::Index j = row / n;
    for (Eigen::Index col = 0; col < n2; ++col) {
      const Eigen::Index k = col % n;
      const Eigen::Index l = col / n;
      Complex v(0.0, 0.0);
      if (j == l) v += g(i, k);
      if (i == k) v += g_conj(j, l);
      for (const auto& s : sandwiches) v += s.weight * (*s.jump)(i, k) * std::conj((*s.jump)(j, l));
      out(row, col) = v;
    }
  };

  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index row = 0; row < n2; ++row) fill_row(row);
  } else {
    for (Eigen::Index row = 0; row < n2; ++row) fill_row(row);
  }
  return out;
}

}  // namespace icectl
