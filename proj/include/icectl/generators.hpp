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

// GKSL dissipators induced by an environment whose state is an isotropic
// radial momentum distribution n(|k|). Two microscopic models are covered:
// incoherent radiation coupled through the system dipole, and a dilute gas
// of structureless particles scattering off a fixed system.
//
// Units: hbar = k_B = c = 1.

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "icectl/qcore.hpp"

namespace icectl {

/// Non-negative density on radial momentum bins. Bin b is centred at
/// grid()[b] and covers [edge(b), edge(b+1)); the density is constant
/// inside a bin and zero outside the band.
class RadialDistribution {
 public:
  RadialDistribution() = default;
  /// Bin edges are placed at the midpoints between grid points; the outer
  /// edges mirror the first and last half-spacings (clamped at k = 0).
  /// Needs at least two grid points.
  RadialDistribution(std::vector<double> grid, std::vector<double> density);
  /// Explicit edges (size bins+1); bin centres are the edge midpoints.
  static RadialDistribution from_edges(std::vector<double> edges, std::vector<double> density);
  /// Uniform bins covering [k_min, k_max].
  static RadialDistribution uniform(double k_min, double k_max, std::size_t bins, double value = 0.0);

  std::size_t bins() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& density() const { return density_; }
  const std::vector<double>& edges() const { return edges_; }
  double width(std::size_t b) const { return edges_[b + 1] - edges_[b]; }
  double band_min() const { return edges_.front(); }
  double band_max() const { return edges_.back(); }

  /// Piecewise-constant density at radius k (zero outside the band).
  double value_at(double k) const;
  /// Index of the bin containing k, if any.
  std::optional<std::size_t> bin_of(double k) const;
  /// 4 pi sum_b k_b^2 n_b dk_b: the grid quadrature of the 3D integral.
  double total_density() const;
  /// Same quadrature with an extra per-bin weight.
  double weighted_total(const std::vector<double>& weight) const;

  /// Same bins, new densities.
  RadialDistribution with_density(std::vector<double> density) const;

  bool operator==(const RadialDistribution&) const = default;

 private:
  RadialDistribution(std::vector<double> grid, std::vector<double> edges, std::vector<double> density);

  std::vector<double> grid_;
  std::vector<double> edges_;
  std::vector<double> density_;
};

/// Photon distribution at temperature T sampled at the bin centres.
RadialDistribution planck(double temperature, const RadialDistribution& bins);
/// Equilibrium gas distribution C exp(-beta k^2 / 2m), normalized so the
/// grid quadrature equals n_total.
RadialDistribution boltzmann(double beta, double mass, double n_total, const RadialDistribution& bins);

/// Analytic normalization n_total (beta / 2 pi m)^{3/2}.
double boltzmann_constant_analytic(double beta, double mass, double n_total);

/// Eigenbasis of H0 with the transitions grouped by energy change.
/// Each group collects the (to, from) eigenvector pairs whose energy change
/// eps_to - eps_from agrees within 1e-9 max|eps|.
struct TransitionStructure {
  RealVector energies;
  Matrix eigenvectors;
  std::vector<double> energy_changes;  // ascending, symmetric about 0
  std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> pairs;

  Eigen::Index dim() const { return energies.size(); }
};

TransitionStructure transition_structure(const Observable& h0);

/// Dipole split by transition frequency: mu_omega = sum_{eps_n - eps_m =
/// omega} P_m mu P_n, so positive omega lowers the energy.
struct TransitionDecomposition {
  std::vector<double> frequencies;  // ascending
  std::vector<Matrix> operators;

  Eigen::Index dim() const { return operators.empty() ? 0 : operators.front().rows(); }
  std::optional<std::size_t> index_of(double omega, double tol = 1e-12) const;
};

TransitionDecomposition transition_decomposition(const Observable& h0, const Observable& mu);
TransitionDecomposition transition_decomposition(const TransitionStructure& s, const Observable& mu);

/// Radial form factor g(|k|) of the radiation coupling.
class FormFactor {
 public:
  static FormFactor flat(double g0);
  /// Piecewise-constant on the bins implied by `grid`, constant beyond.
  static FormFactor tabulated(std::vector<double> grid, std::vector<double> values);

  double operator()(double k) const;

 private:
  FormFactor() = default;
  double constant_ = 0.0;
  std::optional<RadialDistribution> table_;
};

/// Scattering amplitude T_{to,from}(k_out, k_in) between H0 eigenstates, or
/// nullopt when the table has no entry.
using AmplitudeFn =
    std::function<std::optional<Complex>(Eigen::Index to, Eigen::Index from, double k_out, double k_in)>;

struct MediumCoupling {
  double mass = 1.0;
  AmplitudeFn amplitude;

  /// Momentum-independent amplitudes; entry (to, from) in the H0 eigenbasis.
  static MediumCoupling constant(double mass, Matrix amplitudes);
};

enum class Convention {
  Doubled,  // gamma (2 L rho L^dagger - L^dagger L rho - rho L^dagger L)
  Halved,   // gamma (L rho L^dagger - {L^dagger L, rho} / 2)
};

struct DissipatorTerm {
  Matrix jump;
  double rate = 0.0;
  Convention convention = Convention::Doubled;
};

struct DissipatorSpec {
  Eigen::Index dim = 0;
  std::vector<DissipatorTerm> terms;

  /// Throws InvalidArgument on a negative rate, DimensionMismatch on size.
  void add(Matrix jump, double rate, Convention convention);
  bool empty() const { return terms.empty(); }
};

/// Direct (non-vectorized) evaluation of the dissipator on an operator.
Matrix apply_dissipator(const DissipatorSpec& d, const Matrix& rho);

struct RadiationRates {
  double plus = 0.0;   // emission: |g|^2 (n + 1) shell weight
  double minus = 0.0;  // absorption: |g|^2 n shell weight
};

/// Rates gamma^{+/-}_omega for omega > 0 after the isotropic shell collapse
/// 4 pi^2 omega^2 |g(omega)|^2 [n(omega) + (1 +/- 1)/2]. Below the band the
/// density is zero; above it FrequencyOutOfBand is thrown.
RadiationRates radiation_rates(const RadialDistribution& n, const FormFactor& g, double omega);

/// One doubled-convention channel per nonzero omega with rate
/// gamma^+_omega + gamma^-_{-omega}. omega = 0 carries no rate.
DissipatorSpec radiation_generator(const TransitionDecomposition& td, const RadialDistribution& n,
                                   const FormFactor& g);

/// Halved-convention channels of the dilute-medium generator. Each incoming
/// bin k_b is mapped to the outgoing shell |k'| = sqrt(k_b^2 - 2 m omega);
/// closed channels are skipped. Bins sharing the same T_omega are merged.
DissipatorSpec medium_generator(const TransitionStructure& s, const RadialDistribution& n,
                                const MediumCoupling& cm);

}  // namespace icectl
