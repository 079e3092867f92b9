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

#include "icectl/kinematic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace icectl {

namespace {

void check_dims(const KrausPoint& v, Eigen::Index rho_dim, Eigen::Index o_dim) {
  if (rho_dim != v.n() || o_dim != v.n()) {
    std::ostringstream os;
    os << "Kraus point acts on dimension " << v.n() << ", state/observable have " << rho_dim << "/" << o_dim;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// (I_lambda kron O) V
Matrix left_apply_blocks(const Matrix& stacked, const Matrix& o) {
  const Eigen::Index n = o.rows();
  const Eigen::Index lambda = stacked.rows() / n;
  Matrix out(stacked.rows(), stacked.cols());
  for (Eigen::Index i = 0; i < lambda; ++i) out.middleRows(i * n, n).noalias() = o * stacked.middleRows(i * n, n);
  return out;
}

Matrix herm(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

}  // namespace

std::string_view to_string(Sense s) {
  switch (s) {
    case Sense::Minimize: return "minimize";
    case Sense::Maximize: return "maximize";
    case Sense::Stationary: return "stationary";
  }
  return "unknown";
}

std::string_view to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::MinCandidate: return "min_candidate";
    case CriticalKind::MaxCandidate: return "max_candidate";
    case CriticalKind::SaddleCandidate: return "saddle_candidate";
  }
  return "unknown";
}

KrausPoint KrausPoint::from_stacked(Matrix stacked, Eigen::Index n, double tol) {
  if (n <= 0 || stacked.cols() != n || stacked.rows() % n != 0 || stacked.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "stacked Kraus matrix must be (lambda n) x n");
  }
  KrausPoint k(std::move(stacked), n);
  const double err = k.constraint_error();
  if (!(err <= tol)) {
    std::ostringstream os;
    os << "max |sum K^dagger K - I| = " << err << " exceeds " << tol;
    throw Error(ErrorCode::ConstraintViolation, os.str(), err);
  }
  return k;
}

KrausPoint KrausPoint::from_operators(const std::vector<Matrix>& ops, double tol) {
  if (ops.empty()) throw Error(ErrorCode::DimensionMismatch, "need at least one Kraus operator");
  const Eigen::Index n = ops.front().rows();
  Matrix stacked(n * static_cast<Eigen::Index>(ops.size()), n);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != n || ops[i].cols() != n) throw Error(ErrorCode::DimensionMismatch, "Kraus operators differ in size");
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = ops[i];
  }
  return from_stacked(std::move(stacked), n, tol);
}

KrausPoint KrausPoint::identity(Eigen::Index n, Eigen::Index lambda) {
  if (lambda < 1) throw Error(ErrorCode::InvalidArgument, "lambda must be at least 1");
  Matrix stacked = Matrix::Zero(lambda * n, n);
  stacked.topRows(n).setIdentity();
  return KrausPoint(std::move(stacked), n);
}

std::vector<Matrix> KrausPoint::operators() const {
  std::vector<Matrix> ops;
  for (Eigen::Index i = 0; i < lambda(); ++i) ops.push_back(op(i));
  return ops;
}

double KrausPoint::constraint_error() const {
  return (stacked_.adjoint() * stacked_ - Matrix::Identity(n_, n_)).cwiseAbs().maxCoeff();
}

KrausPoint KrausPoint::dilate(Eigen::Index extra, Rng& rng) const {
  if (extra < 0) throw Error(ErrorCode::InvalidArgument, "extra must be non-negative");
  const Eigen::Index l = lambda();
  const Eigen::Index l2 = l + extra;
  // isometry W (l2 x l) from the first l columns of a Haar unitary
  const Matrix w = random_unitary(l2, rng).leftCols(l);
  Matrix out = Matrix::Zero(l2 * n_, n_);
  for (Eigen::Index a = 0; a < l2; ++a) {
    for (Eigen::Index i = 0; i < l; ++i) out.middleRows(a * n_, n_) += w(a, i) * op(i);
  }
  return KrausPoint(std::move(out), n_);
}

Matrix apply_kraus_raw(const KrausPoint& k, const Matrix& rho) {
  if (rho.rows() != k.n() || rho.cols() != k.n()) throw Error(ErrorCode::DimensionMismatch, "state dimension differs from Kraus point");
  Matrix out = Matrix::Zero(k.n(), k.n());
  const Matrix& v = k.stacked();
  for (Eigen::Index i = 0; i < k.lambda(); ++i) {
    const auto ki = v.middleRows(i * k.n(), k.n());
    out.noalias() += ki * rho * ki.adjoint();
  }
  return out;
}

DensityMatrix apply_kraus(const KrausPoint& k, const DensityMatrix& rho, double tol) {
  return validate_state(apply_kraus_raw(k, rho.matrix()), tol);
}

KrausPoint theorem1_kraus(const DensityMatrix& rho_f, const std::optional<Matrix>& basis) {
  const Eigen::Index n = rho_f.dim();
  const Matrix chi = basis ? *basis : Matrix::Identity(n, n);
  if (chi.rows() != n || chi.cols() != n) throw Error(ErrorCode::DimensionMismatch, "basis must be n x n");
  const double ortho = (chi.adjoint() * chi - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) throw Error(ErrorCode::BasisNotOrthonormal, "basis columns are not orthonormal", ortho);

  const EigenDecomposition eig = spectral_hermitian(rho_f.matrix());
  // populations at round-off level would otherwise enter as sqrt(eps)-sized operators
  const double floor = 16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = eig.values(i) > floor ? eig.values(i) : 0.0;
    for (Eigen::Index j = 0; j < n; ++j) ops.push_back(std::sqrt(p) * eig.vectors.col(i) * chi.col(j).adjoint());
  }
  return KrausPoint::from_operators(ops, 1e-10);
}

KrausPoint random_stiefel(Eigen::Index n, Eigen::Index lambda, std::uint64_t seed) {
  if (n < 1 || lambda < 1) throw Error(ErrorCode::InvalidArgument, "random_stiefel needs n, lambda >= 1");
  Rng rng(seed);
  const Matrix g = random_ginibre(lambda * n, n, rng);
  return retract(KrausPoint(Matrix::Zero(lambda * n, n), n), g);
}

KrausPoint retract(const KrausPoint& v, const Matrix& xi) {
  const Matrix y = v.stacked() + xi;
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix q = qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  // one re-orthonormalization sweep keeps the constraint at ~1e-15
  const Matrix gram = q.adjoint() * q;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() == Eigen::Success) {
    q = llt.matrixU().solve<Eigen::OnTheRight>(q);
  }
  return KrausPoint(std::move(q), v.n());
}

double real_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

Matrix tangent_projection(const KrausPoint& v, const Matrix& z) {
  return z - v.stacked() * herm(v.stacked().adjoint() * z);
}

Matrix random_tangent(const KrausPoint& v, Rng& rng) {
  Matrix z = tangent_projection(v, random_ginibre(v.stacked().rows(), v.n(), rng));
  return z / z.norm();
}

double kinematic_objective_ambient(const Matrix& stacked, const Matrix& rho, const Matrix& o) {
  const Eigen::Index n = o.rows();
  double j = 0.0;
  for (Eigen::Index i = 0; i < stacked.rows() / n; ++i) {
    const auto ki = stacked.middleRows(i * n, n);
    j += (ki * rho * ki.adjoint() * o).trace().real();
  }
  return j;
}

double kinematic_objective(const KrausPoint& v, const DensityMatrix& rho, const Observable& o) {
  check_dims(v, rho.dim(), o.dim());
  return kinematic_objective_ambient(v.stacked(), rho.matrix(), o.matrix());
}

Matrix euclidean_grad(const KrausPoint& v, const DensityMatrix& rho, const Observable& o) {
  check_dims(v, rho.dim(), o.dim());
  return 2.0 * left_apply_blocks(v.stacked(), o.matrix()) * rho.matrix();
}

Matrix riemannian_grad(const KrausPoint& v, const DensityMatrix& rho, const Observable& o) {
  return tangent_projection(v, euclidean_grad(v, rho, o));
}

Matrix riemannian_hessian(const KrausPoint& v, const DensityMatrix& rho, const Observable& o, const Matrix& z) {
  const Matrix g = euclidean_grad(v, rho, o);
  const Matrix dg = 2.0 * left_apply_blocks(z, o.matrix()) * rho.matrix();
  return tangent_projection(v, dg - z * herm(v.stacked().adjoint() * g));
}

namespace {

Eigen::VectorXd to_real(const Matrix& m) {
  Eigen::VectorXd r(2 * m.size());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    r(i) = m.data()[i].real();
    r(m.size() + i) = m.data()[i].imag();
  }
  return r;
}

Matrix from_real(const Eigen::VectorXd& r, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  const Eigen::Index size = rows * cols;
  for (Eigen::Index i = 0; i < size; ++i) m.data()[i] = Complex(r(i), r(size + i));
  return m;
}

// Orthonormal real basis of the tangent space at v: eigenvectors with
// eigenvalue 1 of the tangent projector written in real coordinates.
std::vector<Matrix> tangent_basis(const KrausPoint& v) {
  const Eigen::Index rows = v.stacked().rows();
  const Eigen::Index cols = v.n();
  const Eigen::Index dim = 2 * rows * cols;
  Eigen::MatrixXd p(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(a) = 1.0;
    p.col(a) = to_real(tangent_projection(v, from_real(e, rows, cols)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (p + p.transpose()));
  std::vector<Matrix> basis;
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (eig.eigenvalues()(a) > 0.5) basis.push_back(from_real(eig.eigenvectors().col(a), rows, cols));
  }
  return basis;
}

struct Iterate {
  KrausPoint point;
  double value;
  Matrix grad;
  double grad_norm;
};

Iterate evaluate(KrausPoint p, const DensityMatrix& rho, const Observable& o) {
  const double value = kinematic_objective(p, rho, o);
  Matrix g = riemannian_grad(p, rho, o);
  const double gn = g.norm();
  return {std::move(p), value, std::move(g), gn};
}

// Riemannian gradient descent on sign * J with Barzilai-Borwein trial steps
// and Armijo backtracking. Decreases below the round-off level of J are
// accepted so the iteration can reach gradient norms near 1e-8.
CriticalPointReport gradient_run(const KrausPoint& v0, const DensityMatrix& rho, const Observable& o, Sense sense,
                                 const OptimizeSettings& s) {
  const double sign = sense == Sense::Minimize ? 1.0 : -1.0;
  const double noise = 1e-14 * std::max(1.0, o.matrix().cwiseAbs().maxCoeff());
  Iterate cur = evaluate(v0, rho, o);
  CriticalPointReport rep;
  rep.sense = sense;
  double step = s.initial_step;
  std::size_t it = 0;
  for (; it < s.max_iterations; ++it) {
    if (cur.grad_norm <= s.stat_tol) break;
    const Matrix dir = -sign * cur.grad;
    const double slope = cur.grad_norm * cur.grad_norm;
    bool accepted = false;
    double t = step;
    for (int bt = 0; bt < 60; ++bt) {
      Iterate trial = evaluate(retract(cur.point, t * dir), rho, o);
      const double decrease = sign * (cur.value - trial.value);
      if (decrease >= s.armijo * t * slope || (decrease >= -noise && trial.grad_norm < cur.grad_norm)) {
        const Matrix sdiff = trial.point.stacked() - cur.point.stacked();
        const Matrix ydiff = sign * (trial.grad - cur.grad);
        const double sy = real_inner(sdiff, ydiff);
        const double ss = real_inner(sdiff, sdiff);
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-6, 1e3) : std::min(2.0 * t, 1e3);
        cur = std::move(trial);
        accepted = true;
        break;
      }
      t *= s.shrink;
    }
    if (!accepted) break;
  }
  rep.iterations = it;
  rep.value = cur.value;
  rep.gradient_norm = cur.grad_norm;
  rep.converged = cur.grad_norm <= s.stat_tol;
  rep.point = std::move(cur.point);
  return rep;
}

// Levenberg-Marquardt on |grad J|^2 in a tangent basis; converges to any
// critical point, saddles included.
CriticalPointReport stationary_run(const KrausPoint& v0, const DensityMatrix& rho, const Observable& o,
                                   const OptimizeSettings& s) {
  CriticalPointReport rep;
  rep.sense = Sense::Stationary;
  Iterate cur = evaluate(v0, rho, o);
  double mu = -1.0;
  std::size_t it = 0;
  for (; it < s.max_iterations; ++it) {
    if (cur.grad_norm <= s.stat_tol) break;
    const std::vector<Matrix> basis = tangent_basis(cur.point);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd h(dim, dim);
    Eigen::VectorXd g(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const Matrix hb = riemannian_hessian(cur.point, rho, o, basis[static_cast<std::size_t>(b)]);
      for (Eigen::Index a = 0; a < dim; ++a) h(a, b) = real_inner(basis[static_cast<std::size_t>(a)], hb);
      g(b) = real_inner(basis[static_cast<std::size_t>(b)], cur.grad);
    }
    h = 0.5 * (h + h.transpose());
    const Eigen::MatrixXd h2 = h * h;
    const Eigen::VectorXd rhs = -h * g;
    if (mu < 0.0) mu = 1e-3 * std::max(h2.diagonal().maxCoeff(), 1e-12);
    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      const Eigen::MatrixXd lhs = h2 + mu * Eigen::MatrixXd::Identity(dim, dim);
      const Eigen::VectorXd eta = lhs.ldlt().solve(rhs);
      Matrix xi = Matrix::Zero(cur.point.stacked().rows(), cur.point.n());
      for (Eigen::Index a = 0; a < dim; ++a) xi += eta(a) * basis[static_cast<std::size_t>(a)];
      Iterate trial = evaluate(retract(cur.point, xi), rho, o);
      if (trial.grad_norm < cur.grad_norm) {
        cur = std::move(trial);
        mu = std::max(mu * 0.3, 1e-15);
        accepted = true;
        break;
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }
  rep.iterations = it;
  rep.value = cur.value;
  rep.gradient_norm = cur.grad_norm;
  rep.converged = cur.grad_norm <= s.stat_tol;
  rep.point = std::move(cur.point);
  return rep;
}

}  // namespace

Curvature sample_curvature(const KrausPoint& v, const DensityMatrix& rho, const Observable& o,
                           const OptimizeSettings& s, Rng& rng) {
  const Eigen::Index n = v.n();
  const auto tangent_dim = static_cast<std::size_t>(2 * v.stacked().rows() * n - n * n);
  const std::size_t samples = std::max(s.hessian_directions, tangent_dim);
  // orthonormalize the sampled directions, then Rayleigh-Ritz on their span
  std::vector<Matrix> basis;
  for (std::size_t k = 0; k < samples; ++k) {
    Matrix z = random_tangent(v, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) z -= real_inner(b, z) * b;
    }
    const double norm = z.norm();
    if (norm > 1e-8) basis.push_back(z / norm);
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const Matrix hb = riemannian_hessian(v, rho, o, basis[static_cast<std::size_t>(b)]);
    for (Eigen::Index a = 0; a < dim; ++a) h(a, b) = real_inner(basis[static_cast<std::size_t>(a)], hb);
  }
  h = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  const EigenDecomposition spec = spectral(o);
  const double scale = std::max(1.0, spec.values.maxCoeff() - spec.values.minCoeff());
  const double tol = s.curvature_tol * scale;
  Curvature c;
  if (dim == 0) return c;
  c.min_eigenvalue = eig.eigenvalues().minCoeff();
  c.max_eigenvalue = eig.eigenvalues().maxCoeff();
  for (Eigen::Index a = 0; a < dim; ++a) {
    const double e = eig.eigenvalues()(a);
    if (e > tol) ++c.positive;
    if (e < -tol) ++c.negative;
  }
  return c;
}

CriticalPointReport optimize_stiefel(const KrausPoint& v0, const DensityMatrix& rho, const Observable& o, Sense sense,
                                     const OptimizeSettings& s) {
  check_dims(v0, rho.dim(), o.dim());
  CriticalPointReport rep =
      sense == Sense::Stationary ? stationary_run(v0, rho, o, s) : gradient_run(v0, rho, o, sense, s);

  Rng rng(s.seed);
  const Curvature c = sample_curvature(*rep.point, rho, o, s, rng);
  if (c.positive > 0 && c.negative > 0) {
    rep.classification = CriticalKind::SaddleCandidate;
  } else if (c.negative == 0 && c.positive > 0) {
    rep.classification = CriticalKind::MinCandidate;
  } else if (c.positive == 0 && c.negative > 0) {
    rep.classification = CriticalKind::MaxCandidate;
  } else {
    rep.classification = CriticalKind::SaddleCandidate;  // flat: O proportional to I
  }
  const EigenDecomposition spec = spectral(o);
  const double lo = spec.values.minCoeff();
  const double hi = spec.values.maxCoeff();
  if (rep.classification == CriticalKind::MinCandidate) rep.global = std::abs(rep.value - lo) <= s.global_tol;
  if (rep.classification == CriticalKind::MaxCandidate) rep.global = std::abs(rep.value - hi) <= s.global_tol;
  return rep;
}

std::vector<ValueCluster> LandscapeScan::saddle_clusters() const {
  std::vector<ValueCluster> out;
  for (const auto& c : clusters) {
    if (c.is_saddle()) out.push_back(c);
  }
  return out;
}

LandscapeScan landscape_scan(const DensityMatrix& rho, const Observable& o, const LandscapeSettings& s) {
  if (rho.dim() != o.dim()) throw Error(ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  const Eigen::Index n = rho.dim();
  const Eigen::Index lambda = s.lambda > 0 ? s.lambda : n * n;
  constexpr Sense kSenses[] = {Sense::Minimize, Sense::Maximize, Sense::Stationary};

  LandscapeScan scan;
  const std::size_t total = 3 * s.restarts;
  scan.runs.resize(total);
  const auto run_one = [&](std::size_t id) {
    const Sense sense = kSenses[id / s.restarts];
    const std::size_t r = id % s.restarts;
    Rng seeds = split_stream(s.seed, static_cast<std::uint64_t>(id / s.restarts), r);
    const std::uint64_t start_seed = seeds();
    OptimizeSettings opt = s.optimizer;
    opt.seed = seeds();
    if (sense == Sense::Stationary) opt.stat_tol = s.stationary_tol;
    const KrausPoint v0 = random_stiefel(n, lambda, start_seed);
    scan.runs[id] = LandscapeRun{id, optimize_stiefel(v0, rho, o, sense, opt)};
    scan.runs[id].report.point.reset();
  };

  if (s.exec == Execution::Parallel) {
    // exceptions cannot cross the OpenMP boundary; collect the first one
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t id = 0; id < total; ++id) {
      try {
        run_one(id);
      } catch (...) {
#pragma omp critical(icectl_scan_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::size_t id = 0; id < total; ++id) run_one(id);
  }

  const EigenDecomposition spec = spectral(o);
  scan.global_min = spec.values.minCoeff();
  scan.global_max = spec.values.maxCoeff();

  std::vector<const LandscapeRun*> converged;
  for (const auto& r : scan.runs) {
    if (r.report.converged) converged.push_back(&r);
  }
  std::stable_sort(converged.begin(), converged.end(),
                   [](const LandscapeRun* a, const LandscapeRun* b) { return a->report.value < b->report.value; });
  std::size_t start = 0;
  while (start < converged.size()) {
    std::size_t stop = start + 1;
    while (stop < converged.size() &&
           converged[stop]->report.value - converged[stop - 1]->report.value <= s.cluster_tol) {
      ++stop;
    }
    ValueCluster c;
    double sum = 0.0;
    for (std::size_t i = start; i < stop; ++i) {
      const auto& rep = converged[i]->report;
      sum += rep.value;
      ++c.count;
      switch (rep.classification) {
        case CriticalKind::MinCandidate: ++c.minima; break;
        case CriticalKind::MaxCandidate: ++c.maxima; break;
        case CriticalKind::SaddleCandidate: ++c.saddles; break;
      }
      if (rep.sense == Sense::Stationary) ++c.from_stationary_runs;
    }
    c.value = sum / static_cast<double>(c.count);
    scan.clusters.push_back(c);
    start = stop;
  }
  return scan;
}

void write_scan_csv(std::ostream& os, const LandscapeScan& scan) {
  os << "run,sense,iterations,value,gradient_norm,classification,converged\n";
  os.precision(17);
  for (const auto& r : scan.runs) {
    const auto& rep = r.report;
    os << r.id << ',' << to_string(rep.sense) << ',' << rep.iterations << ',' << rep.value << ','
       << rep.gradient_norm << ',' << to_string(rep.classification) << ',' << (rep.converged ? 1 : 0) << '\n';
  }
}

}  // namespace icectl
