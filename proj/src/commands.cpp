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

#include "icectl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace icectl {
namespace {

std::ofstream open_csv(const CommandOptions& opts, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) throw Error(ErrorCode::InvalidArgument, "--out: cannot create " + opts.out.string() + ": " + ec.message());
  std::ofstream os(opts.out / name, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::InvalidArgument, "--out: cannot write " + (opts.out / name).string());
  return os;
}

void close_csv(std::ofstream& os, const CommandOptions& opts, const char* name) {
  os.close();
  if (!os) throw Error(ErrorCode::InvalidArgument, "--out: failed writing " + (opts.out / name).string());
}

const DensityMatrix& require_initial(const Scenario& s) {
  if (!s.initial_state) throw Error(ErrorCode::InvalidArgument, "initial_state: missing required field");
  return *s.initial_state;
}

TrajectoryCsvOptions csv_options(const Scenario& s) {
  TrajectoryCsvOptions o;
  o.elements = s.output.elements;
  if (s.objective) {
    if (const auto* st = std::get_if<StateTransferObjective>(&*s.objective)) o.target = st->target;
  }
  return o;
}

std::string format_spectrum(const Matrix& rho) {
  const RealVector ev = spectral_hermitian(rho).values;
  std::ostringstream os;
  os << std::setprecision(6) << '(';
  for (Eigen::Index i = ev.size(); i-- > 0;) os << std::max(0.0, ev(i)) << (i ? ", " : "");
  os << ')';
  return os.str();
}

}  // namespace

void cmd_propagate(const Scenario& s, const CommandOptions& opts, std::ostream& log) {
  const DensityMatrix& rho0 = require_initial(s);
  if (s.environment != EnvironmentKind::None && s.schedule.environment.empty()) {
    throw Error(ErrorCode::InvalidArgument, "environment.distribution: required by propagate");
  }
  PropagateOptions po;
  po.record_every = s.output.record_every;
  const Trajectory traj = propagate(rho0, s.system, s.schedule, po);

  std::ofstream csv = open_csv(opts, "trajectory.csv");
  write_trajectory_csv(csv, traj, csv_options(s));
  close_csv(csv, opts, "trajectory.csv");

  const double j2 = j2_cost(s.schedule, s.weights);
  log << std::setprecision(10);
  if (s.objective) {
    const PerformanceIndex p = performance_index(evaluate_objective(*s.objective, traj), j2);
    log << "J1 = " << p.j1 << "\nJ2 = " << p.j2 << "\nJ  = " << p.total << '\n';
  } else {
    log << "J1 = (no objective)\nJ2 = " << j2 << '\n';
  }
  log << "final spectrum " << format_spectrum(traj.final_state) << '\n';
  log << "wrote " << (opts.out / "trajectory.csv").string() << '\n';
}

void cmd_ga(const Scenario& s, const CommandOptions& opts, std::ostream& log) {
  const ControlProblem problem = s.control_problem();
  GASettings settings = s.ga.value_or(GASettings{});
  settings.seed = s.seed;
  const GAResult result = evolve(problem, settings);

  std::ofstream hist = open_csv(opts, "history.csv");
  write_history_csv(hist, result.history);
  close_csv(hist, opts, "history.csv");

  std::ofstream genome = open_csv(opts, "best_genome.csv");
  write_genome_csv(genome, result.best, problem.bins);
  close_csv(genome, opts, "best_genome.csv");

  PropagateOptions po;
  po.record_every = s.output.record_every;
  const Trajectory traj = propagate(problem.rho0, problem.system, apply_genome(problem, result.best), po);
  std::ofstream csv = open_csv(opts, "trajectory.csv");
  write_trajectory_csv(csv, traj, csv_options(s));
  close_csv(csv, opts, "trajectory.csv");

  log << std::setprecision(10);
  log << "generations " << settings.generations << ", population " << settings.pop_size << ", seed " << settings.seed
      << '\n';
  log << "best J1 = " << result.best_index.j1 << ", J2 = " << result.best_index.j2
      << ", J = " << result.best_index.total << '\n';
  log << "initial spectrum " << format_spectrum(problem.rho0.matrix()) << '\n';
  log << "final spectrum   " << format_spectrum(traj.final_state) << '\n';
  if (s.ga_threshold) {
    const bool met = result.best_index.j1 < *s.ga_threshold;
    log << "threshold J1 < " << *s.ga_threshold << ": " << (met ? "met" : "not met") << '\n';
  }
  log << "wrote history.csv, best_genome.csv, trajectory.csv to " << opts.out.string() << '\n';
}

void cmd_landscape(const Scenario& s, const CommandOptions& opts, std::ostream& log) {
  const DensityMatrix& rho = require_initial(s);
  if (!s.objective || !std::holds_alternative<ObservableObjective>(*s.objective)) {
    throw Error(ErrorCode::InvalidArgument, "objective.kind: landscape needs an observable objective");
  }
  const Observable& o = std::get<ObservableObjective>(*s.objective).observable;
  LandscapeSettings settings = s.landscape.value_or(LandscapeSettings{});
  settings.seed = s.seed;
  const LandscapeScan scan = landscape_scan(rho, o, settings);

  std::ofstream csv = open_csv(opts, "scan.csv");
  write_scan_csv(csv, scan);
  close_csv(csv, opts, "scan.csv");

  std::ofstream cl = open_csv(opts, "clusters.csv");
  cl << "value,count,minima,maxima,saddles,from_stationary_runs,kind\n" << std::setprecision(17);
  for (const auto& c : scan.clusters) {
    cl << c.value << ',' << c.count << ',' << c.minima << ',' << c.maxima << ',' << c.saddles << ','
       << c.from_stationary_runs << ',' << (c.is_saddle() ? "saddle" : "extremum") << '\n';
  }
  close_csv(cl, opts, "clusters.csv");

  log << std::setprecision(8);
  log << "global min " << scan.global_min << ", global max " << scan.global_max << '\n';
  if (rho.dim() == 2) log << "|w| = " << bloch_vector(rho).norm() << '\n';
  log << "  value         runs   min   max   saddle\n";
  for (const auto& c : scan.clusters) {
    log << "  " << std::left << std::setw(13) << c.value << std::right << std::setw(5) << c.count << std::setw(6)
        << c.minima << std::setw(6) << c.maxima << std::setw(9) << c.saddles << (c.is_saddle() ? "  saddle" : "")
        << '\n';
  }
  std::size_t traps = 0;
  for (const auto& r : scan.runs) traps += r.report.local_extremum();
  log << "local extrema: " << traps << '\n';
  log << "wrote scan.csv, clusters.csv to " << opts.out.string() << '\n';
}

void cmd_theorem1(const Scenario& s, const CommandOptions& opts, std::ostream& log) {
  std::optional<DensityMatrix> target = s.theorem1.target;
  if (!target && s.objective) {
    if (const auto* st = std::get_if<StateTransferObjective>(&*s.objective)) target = st->target;
  }
  if (!target) throw Error(ErrorCode::InvalidArgument, "theorem1.target: missing required field");
  const KrausPoint k = theorem1_kraus(*target, s.theorem1.basis);

  std::size_t nonzero = 0;
  for (Eigen::Index i = 0; i < k.lambda(); ++i) nonzero += k.op(i).norm() > 1e-12;

  Rng rng = split_stream(s.seed, 1);
  std::ofstream csv = open_csv(opts, "theorem1.csv");
  csv << "sample,deviation\n" << std::setprecision(17);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.theorem1.samples; ++i) {
    const DensityMatrix rho = random_state(s.dim, rng);
    const double d = hs_distance(apply_kraus_raw(k, rho.matrix()), target->matrix());
    worst = std::max(worst, d);
    csv << i << ',' << d << '\n';
  }
  close_csv(csv, opts, "theorem1.csv");

  log << std::setprecision(6);
  log << "n = " << s.dim << ", Kraus operators " << k.lambda() << " (" << nonzero << " nonzero)\n";
  log << "constraint error " << k.constraint_error() << '\n';
  log << "samples " << s.theorem1.samples << ", max |Phi(rho) - rho_f|_HS = " << worst << '\n';
  log << "wrote " << (opts.out / "theorem1.csv").string() << '\n';
}

int run_command(std::string_view name, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  std::ostringstream sink;
  std::ostream& log = opts.quiet ? static_cast<std::ostream&>(sink) : out;
  try {
    Scenario s = load_scenario(opts.scenario);
    if (opts.seed) s.override_seed(*opts.seed);
    if (name == "propagate") {
      cmd_propagate(s, opts, log);
    } else if (name == "ga") {
      cmd_ga(s, opts, log);
    } else if (name == "landscape") {
      cmd_landscape(s, opts, log);
    } else if (name == "theorem1") {
      cmd_theorem1(s, opts, log);
    } else {
      err << "error: unknown command '" << name << "'\n";
      return kExitValidation;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? kExitNumerical : kExitValidation;
  }
}

}  // namespace icectl
