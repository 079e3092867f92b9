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

#include "icectl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace icectl {

namespace {

constexpr double kPi = std::numbers::pi;

void check_density(const std::vector<double>& density, std::size_t bins) {
  if (density.size() != bins) {
    std::ostringstream os;
    os << "density has " << density.size() << " values for " << bins << " bins";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  for (std::size_t b = 0; b < density.size(); ++b) {
    if (!(density[b] >= 0.0) || !std::isfinite(density[b])) {
      std::ostringstream os;
      os << "density[" << b << "] = " << density[b] << " is not a finite non-negative value";
      throw Error(ErrorCode::InvalidArgument, os.str(), density[b]);
    }
  }
}

void check_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has a non-finite entry");
    if (i > 0 && !(v[i] > v[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be strictly increasing");
    }
  }
  if (!v.empty() && v.front() < 0.0) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be non-negative (radial momentum)");
  }
}

std::vector<double> midpoint_edges(const std::vector<double>& grid) {
  std::vector<double> edges(grid.size() + 1);
  for (std::size_t b = 1; b < grid.size(); ++b) edges[b] = 0.5 * (grid[b - 1] + grid[b]);
  edges.front() = std::max(0.0, grid.front() - 0.5 * (grid[1] - grid[0]));
  edges.back() = grid.back() + 0.5 * (grid.back() - grid[grid.size() - 2]);
  return edges;
}

// Fraction of a 3D isotropic Gaussian exp(-k^2 / 2 s^2) with |k| < K.
double gaussian_radial_mass(double k, double s) {
  const double x = k / s;
  return std::erf(x / std::sqrt(2.0)) - std::sqrt(2.0 / kPi) * x * std::exp(-0.5 * x * x);
}

}  // namespace

RadialDistribution::RadialDistribution(std::vector<double> grid, std::vector<double> edges,
                                       std::vector<double> density)
    : grid_(std::move(grid)), edges_(std::move(edges)), density_(std::move(density)) {}

RadialDistribution::RadialDistribution(std::vector<double> grid, std::vector<double> density) {
  if (grid.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "radial grid needs at least two points (use from_edges for one bin)");
  }
  check_increasing(grid, "radial grid");
  check_density(density, grid.size());
  edges_ = midpoint_edges(grid);
  grid_ = std::move(grid);
  density_ = std::move(density);
}

RadialDistribution RadialDistribution::from_edges(std::vector<double> edges, std::vector<double> density) {
  if (edges.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two bin edges");
  check_increasing(edges, "bin edges");
  check_density(density, edges.size() - 1);
  std::vector<double> grid(edges.size() - 1);
  for (std::size_t b = 0; b < grid.size(); ++b) grid[b] = 0.5 * (edges[b] + edges[b + 1]);
  return RadialDistribution(std::move(grid), std::move(edges), std::move(density));
}

RadialDistribution RadialDistribution::uniform(double k_min, double k_max, std::size_t bins, double value) {
  if (bins == 0 || !(k_max > k_min)) throw Error(ErrorCode::InvalidArgument, "empty radial band");
  std::vector<double> edges(bins + 1);
  const double dk = (k_max - k_min) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) edges[b] = k_min + dk * static_cast<double>(b);
  edges.back() = k_max;
  return from_edges(std::move(edges), std::vector<double>(bins, value));
}

std::optional<std::size_t> RadialDistribution::bin_of(double k) const {
  if (edges_.empty() || k < edges_.front() || k >= edges_.back()) return std::nullopt;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), k);
  return static_cast<std::size_t>(std::distance(edges_.begin(), it) - 1);
}

double RadialDistribution::value_at(double k) const {
  const auto b = bin_of(k);
  return b ? density_[*b] : 0.0;
}

double RadialDistribution::total_density() const {
  return weighted_total(std::vector<double>(bins(), 1.0));
}

double RadialDistribution::weighted_total(const std::vector<double>& weight) const {
  if (weight.size() != bins()) throw Error(ErrorCode::GridMismatch, "weight length differs from bin count");
  double sum = 0.0;
  for (std::size_t b = 0; b < bins(); ++b) sum += grid_[b] * grid_[b] * weight[b] * density_[b] * width(b);
  return 4.0 * kPi * sum;
}

RadialDistribution RadialDistribution::with_density(std::vector<double> density) const {
  check_density(density, bins());
  return RadialDistribution(grid_, edges_, std::move(density));
}

RadialDistribution planck(double temperature, const RadialDistribution& bins) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::NonPositiveTemperature, "temperature must be positive", temperature);
  }
  std::vector<double> n(bins.bins());
  for (std::size_t b = 0; b < n.size(); ++b) {
    const double k = bins.grid()[b];
    if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "Planck occupation diverges at k = 0");
    n[b] = 1.0 / std::expm1(k / temperature);
  }
  return bins.with_density(std::move(n));
}

double boltzmann_constant_analytic(double beta, double mass, double n_total) {
  return n_total * std::pow(beta / (2.0 * kPi * mass), 1.5);
}

RadialDistribution boltzmann(double beta, double mass, double n_total, const RadialDistribution& bins) {
  if (!(beta > 0.0) || !(mass > 0.0) || !(n_total > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "boltzmann requires beta, mass and n_total > 0");
  }
  const double s = std::sqrt(mass / beta);
  const double captured = gaussian_radial_mass(bins.band_max(), s) - gaussian_radial_mass(bins.band_min(), s);
  if (captured < 0.999) {
    std::ostringstream os;
    os << "grid band [" << bins.band_min() << ", " << bins.band_max() << "] holds only " << captured
       << " of the Boltzmann mass";
    throw Error(ErrorCode::GridTooNarrow, os.str(), captured);
  }
  const double c0 = boltzmann_constant_analytic(beta, mass, n_total);
  std::vector<double> n(bins.bins());
  for (std::size_t b = 0; b < n.size(); ++b) {
    const double k = bins.grid()[b];
    n[b] = c0 * std::exp(-beta * k * k / (2.0 * mass));
  }
  RadialDistribution d = bins.with_density(n);
  const double scale = n_total / d.total_density();
  for (double& v : n) v *= scale;
  return bins.with_density(std::move(n));
}

TransitionStructure transition_structure(const Observable& h0) {
  const EigenDecomposition eig = spectral(h0);
  TransitionStructure s;
  s.energies = eig.values;
  s.eigenvectors = eig.vectors;
  const Eigen::Index n = s.dim();

  struct Entry {
    double delta;
    Eigen::Index to;
    Eigen::Index from;
  };
  std::vector<Entry> all;
  all.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index to = 0; to < n; ++to) {
    for (Eigen::Index from = 0; from < n; ++from) {
      all.push_back({s.energies(to) - s.energies(from), to, from});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.delta < b.delta; });

  const double merge_tol = 1e-9 * s.energies.cwiseAbs().maxCoeff();
  std::size_t start = 0;
  while (start < all.size()) {
    std::size_t stop = start + 1;
    while (stop < all.size() && all[stop].delta - all[stop - 1].delta <= merge_tol) ++stop;
    // midpoint keeps the +/- groups exact negatives of each other
    s.energy_changes.push_back(0.5 * (all[start].delta + all[stop - 1].delta));
    auto& group = s.pairs.emplace_back();
    for (std::size_t i = start; i < stop; ++i) group.emplace_back(all[i].to, all[i].from);
    std::sort(group.begin(), group.end());
    start = stop;
  }
  return s;
}

std::optional<std::size_t> TransitionDecomposition::index_of(double omega, double tol) const {
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (std::abs(frequencies[i] - omega) <= tol) return i;
  }
  return std::nullopt;
}

TransitionDecomposition transition_decomposition(const TransitionStructure& s, const Observable& mu) {
  if (mu.dim() != s.dim()) throw Error(ErrorCode::DimensionMismatch, "dipole and H0 dimensions differ");
  const Matrix& v = s.eigenvectors;
  // dipole in the H0 eigenbasis
  const Matrix mu_eig = v.adjoint() * mu.matrix() * v;
  TransitionDecomposition td;
  // radiation frequency omega = eps_from - eps_to = -(energy change); walk
  // the groups backwards to keep frequencies ascending
  for (std::size_t g = s.energy_changes.size(); g-- > 0;) {
    Matrix op = Matrix::Zero(s.dim(), s.dim());
    for (const auto& [to, from] : s.pairs[g]) {
      op += mu_eig(to, from) * v.col(to) * v.col(from).adjoint();
    }
    td.frequencies.push_back(-s.energy_changes[g]);
    td.operators.push_back(std::move(op));
  }
  return td;
}

TransitionDecomposition transition_decomposition(const Observable& h0, const Observable& mu) {
  if (h0.dim() != mu.dim()) throw Error(ErrorCode::DimensionMismatch, "dipole and H0 dimensions differ");
  return transition_decomposition(transition_structure(h0), mu);
}

FormFactor FormFactor::flat(double g0) {
  if (!std::isfinite(g0)) throw Error(ErrorCode::InvalidArgument, "form factor must be finite");
  FormFactor f;
  f.constant_ = g0;
  return f;
}

FormFactor FormFactor::tabulated(std::vector<double> grid, std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "form factor must be finite");
  }
  // RadialDistribution wants non-negative values; store |g| since only |g|^2
  // enters the rates
  for (double& v : values) v = std::abs(v);
  FormFactor f;
  if (grid.size() == 1) {
    f.constant_ = values.at(0);
    return f;
  }
  f.table_ = RadialDistribution(std::move(grid), std::move(values));
  return f;
}

double FormFactor::operator()(double k) const {
  if (!table_) return constant_;
  const auto& t = *table_;
  if (k < t.band_min()) return t.density().front();
  if (k >= t.band_max()) return t.density().back();
  return t.value_at(k);
}

MediumCoupling MediumCoupling::constant(double mass, Matrix amplitudes) {
  if (!(mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "medium particle mass must be positive", mass);
  if (!amplitudes.allFinite()) throw Error(ErrorCode::InvalidArgument, "scattering amplitudes must be finite");
  MediumCoupling cm;
  cm.mass = mass;
  cm.amplitude = [t = std::move(amplitudes)](Eigen::Index to, Eigen::Index from, double,
                                             double) -> std::optional<Complex> {
    if (to < 0 || from < 0 || to >= t.rows() || from >= t.cols()) return std::nullopt;
    return t(to, from);
  };
  return cm;
}

void DissipatorSpec::add(Matrix jump, double rate, Convention convention) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidArgument, "dissipator rates must be finite and non-negative", rate);
  }
  if (jump.rows() != jump.cols() || (dim != 0 && jump.rows() != dim)) {
    throw Error(ErrorCode::DimensionMismatch, "jump operator dimension differs from dissipator dimension");
  }
  dim = jump.rows();
  terms.push_back({std::move(jump), rate, convention});
}

Matrix apply_dissipator(const DissipatorSpec& d, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  if (d.terms.empty()) return out;
  if (rho.rows() != d.dim || rho.cols() != d.dim) {
    throw Error(ErrorCode::DimensionMismatch, "operator dimension differs from dissipator dimension");
  }
  for (const auto& t : d.terms) {
    const Matrix& l = t.jump;
    const Matrix ldl = l.adjoint() * l;
    const Matrix sandwich = l * rho * l.adjoint();
    const Matrix anti = ldl * rho + rho * ldl;
    if (t.convention == Convention::Doubled) {
      out += t.rate * (2.0 * sandwich - anti);
    } else {
      out += t.rate * (sandwich - 0.5 * anti);
    }
  }
  return out;
}

RadiationRates radiation_rates(const RadialDistribution& n, const FormFactor& g, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "radiation rates need omega > 0", omega);
  if (omega > n.band_max()) {
    std::ostringstream os;
    os << "transition frequency " << omega << " lies above the radial band (max " << n.band_max() << ")";
    throw Error(ErrorCode::FrequencyOutOfBand, os.str(), omega);
  }
  const double gk = g(omega);
  const double shell = 4.0 * kPi * kPi * omega * omega * gk * gk;
  const double occupation = n.value_at(omega);
  return {shell * (occupation + 1.0), shell * occupation};
}

DissipatorSpec radiation_generator(const TransitionDecomposition& td, const RadialDistribution& n,
                                   const FormFactor& g) {
  DissipatorSpec d;
  d.dim = td.dim();
  for (std::size_t i = 0; i < td.frequencies.size(); ++i) {
    const double omega = td.frequencies[i];
    if (omega == 0.0) continue;
    const Matrix& op = td.operators[i];
    if (op.cwiseAbs().maxCoeff() == 0.0) continue;
    // gamma^+_omega needs omega > 0, gamma^-_{-omega} needs -omega > 0
    const double rate = omega > 0.0 ? radiation_rates(n, g, omega).plus : radiation_rates(n, g, -omega).minus;
    if (rate == 0.0) continue;
    d.add(op, rate, Convention::Doubled);
  }
  return d;
}

DissipatorSpec medium_generator(const TransitionStructure& s, const RadialDistribution& n,
                                const MediumCoupling& cm) {
  if (!(cm.mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "medium particle mass must be positive", cm.mass);
  if (!cm.amplitude) throw Error(ErrorCode::MissingAmplitude, "no scattering amplitudes supplied");
  const Eigen::Index dim = s.dim();
  const Matrix& v = s.eigenvectors;
  const double m = cm.mass;

  DissipatorSpec d;
  d.dim = dim;
  for (std::size_t g = 0; g < s.energy_changes.size(); ++g) {
    // medium convention: T_omega raises the system energy by omega
    const double omega = s.energy_changes[g];
    std::vector<DissipatorTerm> channel;
    for (std::size_t b = 0; b < n.bins(); ++b) {
      const double nb = n.density()[b];
      if (nb == 0.0) continue;
      const double k = n.grid()[b];
      const double k_out_sq = k * k - 2.0 * m * omega;
      if (k_out_sq < 0.0) continue;  // closed channel
      const double k_out = std::sqrt(k_out_sq);

      Matrix t = Matrix::Zero(dim, dim);
      for (const auto& [to, from] : s.pairs[g]) {
        const auto amp = cm.amplitude(to, from, k_out, k);
        if (!amp) {
          std::ostringstream os;
          os << "no amplitude for (to=" << to << ", from=" << from << ", |k'|=" << k_out << ", |k|=" << k << ")";
          throw Error(ErrorCode::MissingAmplitude, os.str());
        }
        if (*amp != Complex(0.0, 0.0)) t += *amp * v.col(to) * v.col(from).adjoint();
      }
      if (t.cwiseAbs().maxCoeff() == 0.0) continue;

      // 2 pi x (4 pi k^2 n dk incoming) x (4 pi m k' outgoing shell)
      const double rate = 2.0 * kPi * (4.0 * kPi * k * k * nb * n.width(b)) * (4.0 * kPi * m * k_out);
      if (rate == 0.0) continue;
      auto same = std::find_if(channel.begin(), channel.end(), [&](const DissipatorTerm& c) { return c.jump == t; });
      if (same != channel.end()) {
        same->rate += rate;
      } else {
        channel.push_back({std::move(t), rate, Convention::Halved});
      }
    }
    for (auto& c : channel) d.add(std::move(c.jump), c.rate, c.convention);
  }
  return d;
}

}  // namespace icectl
