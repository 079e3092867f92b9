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

#include "icectl/gaopt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <sstream>

namespace icectl {

RadialDistribution decode(const Genome& genome, const RadialDistribution& grid) {
  if (genome.genes.size() != grid.bins()) {
    std::ostringstream os;
    os << "genome has " << genome.genes.size() << " genes for " << grid.bins() << " bins";
    throw Error(ErrorCode::LengthMismatch, os.str());
  }
  return grid.with_density(genome.genes);
}

Genome encode(const RadialDistribution& n) { return Genome{n.density(), {}}; }

void GASettings::validate() const {
  if (pop_size < 2) throw Error(ErrorCode::InvalidArgument, "pop_size must be at least 2");
  if (tournament_k < 1) throw Error(ErrorCode::InvalidArgument, "tournament_k must be at least 1");
  if (elitism >= pop_size) throw Error(ErrorCode::InvalidArgument, "elitism must be smaller than pop_size");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "mutation_rate outside [0, 1]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "crossover_rate outside [0, 1]");
  if (!(n_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "n_max must be non-negative");
  if (mutation_sigma && !(*mutation_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mutation_sigma must be non-negative");
  if (u_max && !(*u_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "u_max must be non-negative");
}

ControlSchedule apply_genome(const ControlProblem& problem, const Genome& genome) {
  ControlSchedule s = problem.schedule;
  s.environment = {decode(genome, problem.bins)};
  if (!genome.coherent.empty()) s.coherent = genome.coherent;
  return s;
}

PerformanceIndex fitness(const ControlProblem& problem, const Genome& genome) {
  const ControlSchedule s = apply_genome(problem, genome);
  const Matrix rho_t = final_state(problem.rho0, problem.system, s);
  const double j1 = std::visit(
      [&](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, ObservableObjective>) {
          return j1_observable(rho_t, o.observable);
        } else if constexpr (std::is_same_v<T, StateTransferObjective>) {
          return j1_state(rho_t, o.target);
        } else {
          throw Error(ErrorCode::InvalidArgument, "the GA optimizes observable or state-transfer objectives only");
          return 0.0;
        }
      },
      problem.objective);
  return performance_index(j1, j2_cost(s, problem.weights));
}

namespace {

double distance(const Genome& a, const Genome& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.genes.size(); ++i) sum += (a.genes[i] - b.genes[i]) * (a.genes[i] - b.genes[i]);
  for (std::size_t l = 0; l < a.coherent.size(); ++l) {
    for (std::size_t k = 0; k < a.coherent[l].size(); ++k) {
      const double d = a.coherent[l][k] - b.coherent[l][k];
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

double mean_pairwise_distance(const std::vector<Genome>& pop) {
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (std::size_t j = i + 1; j < pop.size(); ++j) {
      sum += distance(pop[i], pop[j]);
      ++pairs;
    }
  }
  return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

std::string describe(const Genome& g) {
  std::ostringstream os;
  os.precision(17);
  os << "genes=[";
  for (std::size_t i = 0; i < g.genes.size(); ++i) os << (i ? "," : "") << g.genes[i];
  os << "]";
  return os.str();
}

std::vector<PerformanceIndex> evaluate_population(const ControlProblem& problem, const std::vector<Genome>& pop,
                                                  std::size_t first, Execution exec,
                                                  std::vector<PerformanceIndex> known) {
  known.resize(pop.size());
  std::exception_ptr failure;
  std::size_t failed_index = pop.size();
  const auto eval = [&](std::size_t i) { known[i] = fitness(problem, pop[i]); };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = first; i < pop.size(); ++i) {
      try {
        eval(i);
      } catch (...) {
#pragma omp critical(icectl_ga_failure)
        if (!failure || i < failed_index) {
          failure = std::current_exception();
          failed_index = i;
        }
      }
    }
  } else {
    for (std::size_t i = first; i < pop.size(); ++i) {
      try {
        eval(i);
      } catch (...) {
        failure = std::current_exception();
        failed_index = i;
        break;
      }
    }
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " [individual " + std::to_string(failed_index) + ", " +
                                describe(pop[failed_index]) + "]",
                  e.magnitude());
    }
  }
  return known;
}

GenerationRecord summarize(std::size_t generation, const std::vector<Genome>& pop,
                           const std::vector<PerformanceIndex>& fit) {
  GenerationRecord rec;
  rec.generation = generation;
  std::size_t best = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < fit.size(); ++i) {
    sum += fit[i].total;
    if (fit[i].total < fit[best].total) best = i;
  }
  rec.best = fit[best].total;
  rec.best_index = fit[best];
  rec.mean = sum / static_cast<double>(fit.size());
  rec.best_genome = pop[best];
  rec.diversity = mean_pairwise_distance(pop);
  return rec;
}

}  // namespace

GAResult evolve(const ControlProblem& problem, const GASettings& settings) {
  settings.validate();
  if (std::holds_alternative<MapMatchObjective>(problem.objective)) {
    throw Error(ErrorCode::InvalidArgument, "the GA optimizes observable or state-transfer objectives only");
  }
  const std::size_t bins = problem.bins.bins();
  const std::size_t channels = problem.system.couplings.size();
  const std::size_t intervals = problem.schedule.intervals();
  const bool coherent = settings.u_max.has_value() && channels > 0;
  const double sigma = settings.mutation_sigma.value_or(0.1 * settings.n_max);
  const double u_max = settings.u_max.value_or(0.0);
  const double sigma_u = 0.1 * u_max;

  std::vector<Genome> pop(settings.pop_size);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    Rng rng = split_stream(settings.seed, 0, i);
    std::uniform_real_distribution<double> gene(0.0, settings.n_max);
    std::uniform_real_distribution<double> amp(-u_max, u_max);
    Genome& g = pop[i];
    g.genes.resize(bins);
    const bool zero = settings.include_zero_genome && i == 0;
    for (double& v : g.genes) v = zero ? 0.0 : gene(rng);
    if (coherent) {
      g.coherent.assign(channels, std::vector<double>(intervals, 0.0));
      for (auto& c : g.coherent) {
        for (double& v : c) v = zero ? 0.0 : amp(rng);
      }
    }
  }
  std::vector<PerformanceIndex> fit = evaluate_population(problem, pop, 0, settings.exec, {});

  GAResult result;
  result.history.generations.push_back(summarize(0, pop, fit));

  std::vector<std::size_t> order(pop.size());
  for (std::size_t gen = 1; gen <= settings.generations; ++gen) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a].total < fit[b].total; });

    std::vector<Genome> next(pop.size());
    std::vector<PerformanceIndex> next_fit(settings.elitism);
    for (std::size_t e = 0; e < settings.elitism; ++e) {
      next[e] = pop[order[e]];
      next_fit[e] = fit[order[e]];
    }

    const auto reproduce = [&](std::size_t slot) {
      Rng rng = split_stream(settings.seed, gen, slot);
      std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      const auto tournament = [&]() {
        std::size_t best = pick(rng);
        for (std::size_t t = 1; t < settings.tournament_k; ++t) {
          const std::size_t c = pick(rng);
          if (fit[c].total < fit[best].total || (fit[c].total == fit[best].total && c < best)) best = c;
        }
        return best;
      };
      const Genome& a = pop[tournament()];
      const Genome& b = pop[tournament()];
      Genome child = a;
      if (unit(rng) < settings.crossover_rate) {
        for (std::size_t i = 0; i < bins; ++i) {
          if (unit(rng) < 0.5) child.genes[i] = b.genes[i];
        }
        for (std::size_t l = 0; l < child.coherent.size(); ++l) {
          for (std::size_t k = 0; k < child.coherent[l].size(); ++k) {
            if (unit(rng) < 0.5) child.coherent[l][k] = b.coherent[l][k];
          }
        }
      }
      for (double& v : child.genes) {
        if (unit(rng) < settings.mutation_rate) v = std::clamp(v + sigma * normal(rng), 0.0, settings.n_max);
      }
      for (auto& c : child.coherent) {
        for (double& v : c) {
          if (unit(rng) < settings.mutation_rate) v = std::clamp(v + sigma_u * normal(rng), -u_max, u_max);
        }
      }
      next[slot] = std::move(child);
    };
    if (settings.exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
      for (std::size_t slot = settings.elitism; slot < pop.size(); ++slot) reproduce(slot);
    } else {
      for (std::size_t slot = settings.elitism; slot < pop.size(); ++slot) reproduce(slot);
    }

    fit = evaluate_population(problem, next, settings.elitism, settings.exec, std::move(next_fit));
    pop = std::move(next);
    result.history.generations.push_back(summarize(gen, pop, fit));
  }

  const GenerationRecord& last = result.history.generations.back();
  result.best = last.best_genome;
  result.best_index = last.best_index;
  return result;
}

void write_history_csv(std::ostream& os, const GAHistory& history) {
  os << "generation,best,mean\n";
  os.precision(17);
  for (const auto& g : history.generations) os << g.generation << ',' << g.best << ',' << g.mean << '\n';
}

void write_genome_csv(std::ostream& os, const Genome& genome, const RadialDistribution& grid) {
  const RadialDistribution n = decode(genome, grid);
  os << "k,n\n";
  os.precision(17);
  for (std::size_t b = 0; b < n.bins(); ++b) os << n.grid()[b] << ',' << n.density()[b] << '\n';
}

}  // namespace icectl
