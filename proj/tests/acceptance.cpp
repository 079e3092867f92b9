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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "icectl/commands.hpp"
#include "icectl/gaopt.hpp"
#include "icectl/kinematic.hpp"
#include "icectl/objectives.hpp"
#include "icectl/propagator.hpp"
#include "icectl/scenario.hpp"

using namespace icectl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

std::vector<double> sorted_eigenvalues(const Matrix& h) {
  const RealVector ev = spectral_hermitian(h).values;
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

ControlledSystem random_system(Eigen::Index n, bool medium, Rng& rng, std::size_t channels) {
  std::uniform_real_distribution<double> energy(0.0, 1.5), amp(0.02, 0.2);
  RealVector eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps(i) = energy(rng);
  std::sort(eps.data(), eps.data() + n);
  const Matrix h0 = eps.cast<Complex>().asDiagonal();
  ControlledSystem sys{h0, Matrix(), {}, NoEnvironment{}};
  for (std::size_t l = 0; l < channels; ++l) sys.couplings.push_back(random_observable(n, rng).matrix());
  const Observable h = make_observable(h0);
  if (medium) {
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) a(i, j) = a(j, i) = amp(rng);
    sys.environment = MediumEnvironment{transition_structure(h), MediumCoupling::constant(1.0, a)};
  } else {
    sys.environment = RadiationEnvironment{transition_decomposition(h, random_observable(n, rng)),
                                           FormFactor::flat(amp(rng))};
  }
  return sys;
}

ControlSchedule random_schedule(std::size_t intervals, std::size_t channels, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), dt(0.05, 0.4);
  ControlSchedule s;
  s.times.push_back(0.0);
  for (std::size_t k = 0; k < intervals; ++k) s.times.push_back(s.times.back() + dt(rng));
  s.coherent.assign(channels, std::vector<double>(intervals));
  for (auto& c : s.coherent)
    for (double& v : c) v = u(rng);
  return s;
}

RadialDistribution random_distribution(bool medium, Rng& rng) {
  const RadialDistribution grid = RadialDistribution::uniform(0.0, 4.0, 20);
  std::uniform_real_distribution<double> t(0.2, 3.0), d(0.0, 0.05);
  if (!medium) return planck(t(rng), grid);
  std::vector<double> density(grid.bins());
  for (double& x : density) x = d(rng);
  return grid.with_density(std::move(density));
}

// 1. every recorded instant is a valid state and the final map is CP
Outcome criterion_cptp() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst_trace = 0.0, worst_min = 0.0, worst_herm = 0.0, worst_choi = 0.0;
  for (int s = 0; s < 50; ++s) {
    const Eigen::Index n = 2 + s % 3;
    const bool medium = (s / 3) % 2 == 1;
    const ControlledSystem sys = random_system(n, medium, rng, 1 + s % 2);
    ControlSchedule sched = random_schedule(12, sys.couplings.size(), rng);
    sched.environment = {random_distribution(medium, rng)};
    PropagateOptions po;
    po.state_tol = 1e-6;
    const Trajectory traj = propagate(random_state(n, rng), sys, sched, po);
    for (const auto& st : traj.states) {
      const Matrix& m = st.matrix();
      worst_trace = std::max(worst_trace, std::abs(m.trace() - Complex(1.0, 0.0)));
      worst_min = std::min(worst_min, min_eigenvalue(m));
      worst_herm = std::max(worst_herm, hermiticity_error(m));
    }
    worst_choi = std::min(worst_choi, min_eigenvalue(choi_matrix(traj.final_map)));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_trace <= 1e-10 && worst_min >= -1e-8 && worst_herm <= 1e-10 && worst_choi >= -1e-8 && secs < 60;
  return {ok, "50 scenarios: max|Tr-1| " + fmt(worst_trace) + ", min eig " + fmt(worst_min) + ", herm " +
                  fmt(worst_herm) + ", Choi min " + fmt(worst_choi) + ", " + fmt(secs) + " s"};
}

// 2. coherent control alone keeps the spectrum
Outcome criterion_unitary() {
  Rng rng(202);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 3;
    ControlledSystem sys{random_observable(n, rng).matrix(), Matrix(), {}, NoEnvironment{}};
    for (int l = 0; l < 2; ++l) sys.couplings.push_back(random_observable(n, rng).matrix());
    const ControlSchedule sched = random_schedule(25, 2, rng);
    const DensityMatrix rho0 = random_state(n, rng);
    const auto ev0 = sorted_eigenvalues(rho0.matrix());
    for (const auto& st : propagate(rho0, sys, sched).states) {
      const auto ev = sorted_eigenvalues(st.matrix());
      for (std::size_t i = 0; i < ev.size(); ++i) worst = std::max(worst, std::abs(ev[i] - ev0[i]));
    }
  }
  return {worst <= 1e-9, "20 trajectories: max eigenvalue drift " + fmt(worst)};
}

ControlledSystem two_level(double g0) {
  Matrix h0 = Matrix::Zero(2, 2);
  h0(1, 1) = 1.0;
  ControlledSystem sys{h0, Matrix(), {}, NoEnvironment{}};
  sys.environment = RadiationEnvironment{
      transition_decomposition(make_observable(h0), make_observable(pauli_x())), FormFactor::flat(g0)};
  return sys;
}

// 3. vacuum decay and the thermal fixed point
Outcome criterion_two_level() {
  const auto t0 = Clock::now();
  const double g0 = 0.1;
  const double gamma = 4.0 * kPi * kPi * g0 * g0;
  const ControlledSystem sys = two_level(g0);
  ControlSchedule sched;
  sched.times = ControlSchedule::uniform_times(5.0, 50);
  // omega = 1 is the centre of bin 7
  const RadialDistribution grid = RadialDistribution::uniform(0.0, 2.0, 15);
  sched.environment = {grid};
  const Trajectory traj = propagate(basis_state(2, 1), sys, sched);
  double decay = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double pe = traj.states[i].matrix()(1, 1).real();
    decay = std::max(decay, std::abs(pe - std::exp(-2.0 * gamma * traj.times[i])));
  }

  double gibbs = 0.0, ratio = 0.0;
  for (double temperature : {0.5, 1.0, 2.0}) {
    ControlSchedule hot;
    hot.times = {0.0, 200.0};
    hot.environment = {planck(temperature, grid)};
    const Matrix rho = final_state(basis_state(2, 1), sys, hot);
    const double z = 1.0 + std::exp(-1.0 / temperature);
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = 1.0 / z;
    g(1, 1) = std::exp(-1.0 / temperature) / z;
    gibbs = std::max(gibbs, hs_distance(rho, g));
    const auto r = radiation_rates(planck(temperature, grid), FormFactor::flat(g0), 1.0);
    ratio = std::max(ratio, std::abs(r.minus / r.plus - std::exp(-1.0 / temperature)));
  }
  const double secs = seconds_since(t0);
  const bool ok = decay <= 1e-8 && gibbs <= 1e-6 && ratio <= 1e-12;
  return {ok, "vacuum decay vs exp(-2 gamma t) (doubled dissipator; not exp(-4 gamma t)) max err " + fmt(decay) +
                  "; Gibbs HS distance " + fmt(gibbs) + " at T in {0.5, 1, 2}; detailed balance err " + fmt(ratio) +
                  ", " + fmt(secs) + " s"};
}

// 4. two-parameter family composes
Outcome criterion_composition() {
  Rng rng(404);
  int good = 0;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 2 + t % 3;
    const bool medium = t % 2 == 1;
    const ControlledSystem sys = random_system(n, medium, rng, 1);
    ControlSchedule sched = random_schedule(10, 1, rng);
    for (std::size_t k = 0; k < sched.intervals(); ++k) sched.environment.push_back(random_distribution(medium, rng));
    const std::size_t split = 1 + static_cast<std::size_t>(t) % 9;
    good += compose_check(sys, sched, split, 1e-10);
    const Matrix whole = propagation_map(sys, sched, 0, 10).matrix;
    const Matrix parts = propagation_map(sys, sched, split, 10).matrix * propagation_map(sys, sched, 0, split).matrix;
    worst = std::max(worst, (whole - parts).cwiseAbs().maxCoeff());
  }
  return {good == 20 && worst <= 1e-10, std::to_string(good) + "/20 schedules compose, max deviation " + fmt(worst)};
}

// 5. all-to-one Kraus construction
Outcome criterion_theorem1() {
  Rng rng(505);
  double worst = 0.0, spread = 0.0;
  for (Eigen::Index n = 2; n <= 5; ++n) {
    for (int t = 0; t < 100; ++t) {
      const DensityMatrix target = random_state(n, rng);
      const KrausPoint k = theorem1_kraus(target);
      const Matrix a = apply_kraus_raw(k, random_state(n, rng).matrix());
      const Matrix b = apply_kraus_raw(k, random_state(n, rng).matrix());
      worst = std::max(worst, hs_distance(a, target.matrix()));
      spread = std::max(spread, (a - b).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12 && spread <= 1e-12,
          "n = 2..5 x 100 pairs: max HS error " + fmt(worst) + ", state dependence " + fmt(spread)};
}

// 6. Riemannian gradient vs central differences
Outcome criterion_gradient() {
  Rng rng(606);
  const double h = 1e-6;
  double worst = 0.0;
  for (int p = 0; p < 20; ++p) {
    const Eigen::Index n = 2 + p % 2;
    const DensityMatrix rho = random_state(n, rng);
    const Observable o = random_observable(n, rng);
    const KrausPoint v = random_stiefel(n, n * n, 6000 + static_cast<std::uint64_t>(p));
    const Matrix g = riemannian_grad(v, rho, o);
    for (int d = 0; d < 20; ++d) {
      const Matrix z = random_tangent(v, rng);
      const double fd = (kinematic_objective_ambient(v.stacked() + h * z, rho.matrix(), o.matrix()) -
                         kinematic_objective_ambient(v.stacked() - h * z, rho.matrix(), o.matrix())) /
                        (2.0 * h);
      const double an = real_inner(g, z);
      worst = std::max(worst, std::abs(an - fd) / std::max(std::abs(fd), 1e-300));
    }
  }
  return {worst <= 1e-5, "20 points x 20 directions: max relative error " + fmt(worst)};
}

// 7. no traps on the qubit landscape
Outcome criterion_trap_free() {
  const auto t0 = Clock::now();
  Rng rng(707);
  std::size_t descents = 0, ascents = 0, unconverged = 0, traps = 0, missed = 0;
  for (int pair = 0; pair < 5; ++pair) {
    const DensityMatrix rho = random_state(2, rng);
    const Observable o = random_observable(2, rng);
    const auto spec = spectral(o).values;
    LandscapeSettings s;
    s.restarts = 200;
    s.lambda = 4;
    s.seed = 7000 + static_cast<std::uint64_t>(pair);
    const LandscapeScan scan = landscape_scan(rho, o, s);
    for (const auto& run : scan.runs) {
      const CriticalPointReport& r = run.report;
      if (r.sense == Sense::Stationary) continue;
      if (!r.converged) {
        ++unconverged;
        continue;
      }
      traps += r.local_extremum();
      if (r.sense == Sense::Minimize) {
        ++descents;
        missed += r.value > spec(0) + 1e-5;
      } else {
        ++ascents;
        missed += r.value < spec(1) - 1e-5;
      }
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = missed == 0 && traps == 0 && unconverged == 0 && descents == 1000 && ascents == 1000 && secs < 300;
  return {ok, "5 pairs x 200 restarts: " + std::to_string(descents) + " descents, " + std::to_string(ascents) +
                  " ascents converged, " + std::to_string(unconverged) + " unconverged, " + std::to_string(missed) +
                  " off the global value, " + std::to_string(traps) + " local extrema, " + fmt(secs) + " s"};
}

// 8. saddle values (1 +- |w|) / 2 for O = diag(0, 1)
Outcome criterion_saddles() {
  Matrix od = Matrix::Zero(2, 2);
  od(1, 1) = 1.0;
  const Observable o = make_observable(od);
  LandscapeSettings s;
  s.restarts = 100;
  s.lambda = 4;
  s.seed = 808;

  const auto found = [&](const LandscapeScan& scan, double value) {
    for (const auto& c : scan.saddle_clusters()) {
      if (std::abs(c.value - value) <= 1e-4 && c.from_stationary_runs >= 1) return true;
    }
    return false;
  };

  bool ok = landscape_scan(basis_state(2, 0), o, s).saddle_clusters().empty();
  std::string detail = std::string("pure: ") + (ok ? "no saddles" : "unexpected saddles");
  for (double w : {0.0, 0.3, 0.5, 0.8}) {
    const LandscapeScan scan = landscape_scan(state_from_bloch(Eigen::Vector3d(0.0, 0.0, w)), o, s);
    const bool lo = found(scan, (1.0 - w) / 2.0), hi = found(scan, (1.0 + w) / 2.0);
    ok = ok && lo && hi;
    detail += "; |w| = " + fmt(w, 2) + ": " + (lo && hi ? "found " : "MISSING ") + fmt((1.0 - w) / 2.0, 3);
    if (w > 0.0) detail += ", " + fmt((1.0 + w) / 2.0, 3);
  }
  return {ok, detail};
}

// 9. learning control into mixed four-level targets
Outcome criterion_mixed_targets() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* tag : {"a", "b", "c"}) {
    const Scenario sc = load_scenario(fs::path(ICECTL_SCENARIO_DIR) / (std::string("mixed_target_") + tag + ".json"));
    const ControlProblem problem = sc.control_problem();
    GASettings settings = *sc.ga;
    settings.seed = sc.seed;
    const GAResult r = evolve(problem, settings);
    bool monotone = true;
    for (std::size_t g = 1; g < r.history.generations.size(); ++g) {
      monotone = monotone && r.history.generations[g].best <= r.history.generations[g - 1].best;
    }
    const Matrix final = final_state(problem.rho0, problem.system, apply_genome(problem, r.best));
    const auto e0 = sorted_eigenvalues(problem.rho0.matrix()), e1 = sorted_eigenvalues(final);
    double change = 0.0;
    for (std::size_t i = 0; i < e0.size(); ++i) change = std::max(change, std::abs(e0[i] - e1[i]));
    const bool pass = r.best_index.j1 < 0.05 && monotone && change > 1e-3 && settings.pop_size == 50 &&
                      settings.generations <= 200;
    ok = ok && pass;
    detail += std::string(detail.empty() ? "" : "; ") + "(" + tag + ") best HS " + fmt(r.best_index.j1) +
              (monotone ? ", monotone" : ", NOT monotone") + ", spectrum shift " + fmt(change);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 600;
  return {ok, detail + ", " + fmt(secs) + " s"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 10. cmd_ga reproduces its CSVs byte for byte
Outcome criterion_determinism() {
  char pattern[] = "/tmp/icectl-acceptance-XXXXXX";
  const char* dir = mkdtemp(pattern);
  if (!dir) return {false, "could not create a temporary directory"};
  const fs::path root(dir);
  std::ostringstream sink;
  int codes = 0;
  for (const char* run : {"first", "second"}) {
    CommandOptions opts;
    opts.scenario = fs::path(ICECTL_SCENARIO_DIR) / "mixed_target_a.json";
    opts.out = root / run;
    opts.quiet = true;
    codes += run_command("ga", opts, sink, sink);
  }
  bool same = codes == 0;
  std::size_t bytes = 0;
  for (const char* f : {"history.csv", "best_genome.csv", "trajectory.csv"}) {
    const std::string a = slurp(root / "first" / f), b = slurp(root / "second" / f);
    same = same && !a.empty() && a == b;
    bytes += a.size();
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {same, "mixed_target_a twice with seed 2026: " + std::string(same ? "identical" : "DIFFERENT") + " (" +
                    std::to_string(bytes) + " bytes over 3 CSVs)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"CP/TP propagation", criterion_cptp},
      {"unitary limitation", criterion_unitary},
      {"two-level analytics", criterion_two_level},
      {"composition", criterion_composition},
      {"all-to-one Kraus map", criterion_theorem1},
      {"gradient", criterion_gradient},
      {"trap-free landscape", criterion_trap_free},
      {"saddle values", criterion_saddles},
      {"mixed-state targets", criterion_mixed_targets},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    failed += !out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << out.detail
              << std::endl;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
