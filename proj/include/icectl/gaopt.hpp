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

// Learning control with a generational genetic algorithm. A genome encodes a
// static radial environment distribution (one density per bin) and,
// optionally, piecewise-constant coherent amplitudes; fitness is the
// performance index J1 + J2 of the propagated final state.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "icectl/objectives.hpp"
#include "icectl/parallel.hpp"
#include "icectl/propagator.hpp"

namespace icectl {

struct Genome {
  std::vector<double> genes;                  // density per radial bin
  std::vector<std::vector<double>> coherent;  // [channel][interval], may be empty

  bool operator==(const Genome&) const = default;
};

/// Piecewise-constant distribution on the bins of `grid`; LengthMismatch
/// when the gene count differs from the bin count.
RadialDistribution decode(const Genome& genome, const RadialDistribution& grid);
Genome encode(const RadialDistribution& n);

/// Everything a fitness evaluation needs. The schedule provides the time
/// grid and the default coherent values; its environment entry is replaced
/// by the decoded genome.
struct ControlProblem {
  DensityMatrix rho0;
  ControlledSystem system;
  ControlSchedule schedule;
  RadialDistribution bins;
  ObjectiveSpec objective;
  CostWeights weights;
};

struct GASettings {
  std::size_t pop_size = 50;
  std::size_t generations = 200;
  double mutation_rate = 0.1;
  /// Gaussian mutation width; unset means 0.1 n_max.
  std::optional<double> mutation_sigma;
  double crossover_rate = 0.7;
  std::size_t tournament_k = 3;
  std::size_t elitism = 1;
  std::uint64_t seed = 0;
  double n_max = 1.0;
  /// Coherent amplitudes are optimized in [-u_max, u_max] when set.
  std::optional<double> u_max;
  /// Seed the initial population with the all-zero genome.
  bool include_zero_genome = true;
  Execution exec = Execution::Parallel;

  void validate() const;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double diversity = 0.0;  // mean pairwise Euclidean distance of genomes
  PerformanceIndex best_index;
  Genome best_genome;
};

struct GAHistory {
  std::vector<GenerationRecord> generations;
};

struct GAResult {
  Genome best;
  PerformanceIndex best_index;
  GAHistory history;
};

/// Performance index of one genome. Throws on propagation failure.
PerformanceIndex fitness(const ControlProblem& problem, const Genome& genome);

/// Schedule with the genome decoded into it.
ControlSchedule apply_genome(const ControlProblem& problem, const Genome& genome);

/// Tournament selection, uniform crossover, clipped Gaussian mutation and
/// elitism. Generation 0 is the initial population; `generations` further
/// generations follow. Fitness evaluations of a generation run concurrently
/// under Execution::Parallel; offspring use RNG streams split per
/// (generation, slot), so serial and parallel runs agree bit for bit.
GAResult evolve(const ControlProblem& problem, const GASettings& settings);

/// generation,best,mean
void write_history_csv(std::ostream& os, const GAHistory& history);
/// k,n
void write_genome_csv(std::ostream& os, const Genome& genome, const RadialDistribution& grid);

}  // namespace icectl
