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

// Serial reference against OpenMP kernels. Run with OMP_NUM_THREADS set to
// the core count of interest.

#include <benchmark/benchmark.h>

#include "icectl/gaopt.hpp"
#include "icectl/kinematic.hpp"
#include "icectl/propagator.hpp"

namespace {

using namespace icectl;

DissipatorSpec random_dissipator(Eigen::Index n, Rng& rng) {
  DissipatorSpec d;
  d.dim = n;
  for (int t = 0; t < 4; ++t) d.add(random_ginibre(n, n, rng), 0.1 * (t + 1), t % 2 ? Convention::Halved : Convention::Doubled);
  return d;
}

void BM_LiouvillianKronecker(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  const Matrix h = random_observable(n, rng).matrix();
  const DissipatorSpec d = random_dissipator(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian_reference(h, d));
}

void BM_LiouvillianSerial(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  const Matrix h = random_observable(n, rng).matrix();
  const DissipatorSpec d = random_dissipator(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian(h, d, Execution::Serial));
}

void BM_LiouvillianParallel(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  const Matrix h = random_observable(n, rng).matrix();
  const DissipatorSpec d = random_dissipator(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(liouvillian(h, d, Execution::Parallel));
}

ControlProblem ladder_problem() {
  const Matrix h0 = RealVector::LinSpaced(4, 0.0, 0.3).cast<Complex>().asDiagonal();
  Matrix amps = Matrix::Zero(4, 4);
  for (int i = 0; i < 3; ++i) amps(i, i + 1) = amps(i + 1, i) = 0.1;
  ControlledSystem sys{h0, Matrix(), {}, MediumEnvironment{transition_structure(make_observable(h0)), MediumCoupling::constant(1.0, amps)}};
  const RadialDistribution bins = RadialDistribution::uniform(0.0, 4.0, 32);
  ControlSchedule sched;
  sched.times = ControlSchedule::uniform_times(10.0, 1);
  sched.environment = {bins};
  return ControlProblem{basis_state(4, 0), sys, sched, bins,
                        StateTransferObjective{diagonal_state(RealVector::Constant(4, 0.25))}, CostWeights{}};
}

void BM_GeneticAlgorithm(benchmark::State& state) {
  const ControlProblem problem = ladder_problem();
  GASettings s;
  s.pop_size = 50;
  s.generations = 5;
  s.exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(problem, s));
}

void BM_LandscapeScan(benchmark::State& state) {
  LandscapeSettings s;
  s.restarts = 8;
  s.exec = state.range(0) ? Execution::Parallel : Execution::Serial;
  const DensityMatrix rho = state_from_bloch({0.0, 0.0, 0.5});
  const Observable o = make_observable(pauli_z() * -0.5 + Matrix::Identity(2, 2) * 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(landscape_scan(rho, o, s));
}

}  // namespace

BENCHMARK(BM_LiouvillianKronecker)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_LiouvillianSerial)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_LiouvillianParallel)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_GeneticAlgorithm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LandscapeScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
