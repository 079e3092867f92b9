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

#include "icectl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace icectl {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg, ErrorCode code = ErrorCode::InvalidArgument) {
  throw Error(code, path + ": " + msg);
}

// Runs f and prefixes any library validation error with the field path.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    std::string what = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    throw Error(e.code(), path + ": " + what, e.magnitude());
  }
}

class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key) && !(*j_)[key].is_null(); }

  Node at(const char* key) const {
    require_object();
    if (!has(key)) fail(child_path(key), "missing required field");
    return Node((*j_)[key], child_path(key));
  }

  std::optional<Node> opt(const char* key) const {
    require_object();
    if (!has(key)) return std::nullopt;
    return Node((*j_)[key], child_path(key));
  }

  Node operator[](std::size_t i) const { return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    if (!j_->is_array()) fail(path_, "expected an array");
    return j_->size();
  }

  void require_object() const {
    if (!j_->is_object()) fail(path_, "expected an object");
  }

  double number() const {
    if (!j_->is_number()) fail(path_, "expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail(path_, "expected a finite number");
    return v;
  }

  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail(path_, "must be positive");
    return v;
  }

  double non_negative() const {
    const double v = number();
    if (!(v >= 0.0)) fail(path_, "must be non-negative");
    return v;
  }

  std::uint64_t uint() const {
    if (!j_->is_number_integer() || (j_->is_number_integer() && !j_->is_number_unsigned() && j_->get<long long>() < 0)) {
      fail(path_, "expected a non-negative integer");
    }
    return j_->get<std::uint64_t>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail(path_, "expected true or false");
    return j_->get<bool>();
  }

  std::string string() const {
    if (!j_->is_string()) fail(path_, "expected a string");
    return j_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i].number();
    return out;
  }

  Complex complex() const {
    if (j_->is_number()) return {number(), 0.0};
    if (!j_->is_array() || j_->size() != 2) fail(path_, "expected a number or an [re, im] pair");
    return {(*this)[0].number(), (*this)[1].number()};
  }

  Vector complex_vector() const {
    Vector v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].complex();
    return v;
  }

  Matrix matrix(Eigen::Index rows, Eigen::Index cols) const {
    if (size() != static_cast<std::size_t>(rows)) {
      fail(path_, "expected " + std::to_string(rows) + " rows, found " + std::to_string(size()),
           ErrorCode::DimensionMismatch);
    }
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Node row = (*this)[static_cast<std::size_t>(r)];
      if (row.size() != static_cast<std::size_t>(cols)) {
        fail(row.path(), "expected " + std::to_string(cols) + " columns, found " + std::to_string(row.size()),
             ErrorCode::DimensionMismatch);
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].complex();
    }
    return m;
  }

  Matrix hermitian(Eigen::Index n) const {
    const Matrix m = matrix(n, n);
    return at_path(path_, [&] { return make_observable(m).matrix(); });
  }

 private:
  std::string child_path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
};

DensityMatrix parse_state(const Node& node, Eigen::Index n) {
  node.require_object();
  int forms = 0;
  for (const char* key : {"matrix", "diag", "basis", "bloch", "pure", "maximally_mixed"}) forms += node.has(key);
  if (forms != 1) {
    fail(node.path(), "give exactly one of matrix, diag, basis, bloch, pure, maximally_mixed");
  }
  if (auto m = node.opt("matrix")) {
    const Matrix mat = m->matrix(n, n);
    return at_path(m->path(), [&] { return validate_state(mat); });
  }
  if (auto d = node.opt("diag")) {
    const std::vector<double> p = d->numbers();
    if (static_cast<Eigen::Index>(p.size()) != n) {
      fail(d->path(), "expected " + std::to_string(n) + " populations", ErrorCode::DimensionMismatch);
    }
    return at_path(d->path(), [&] { return diagonal_state(Eigen::Map<const RealVector>(p.data(), n)); });
  }
  if (auto b = node.opt("basis")) {
    const auto k = static_cast<Eigen::Index>(b->uint());
    return at_path(b->path(), [&] { return basis_state(n, k); });
  }
  if (auto b = node.opt("bloch")) {
    if (n != 2) fail(b->path(), "Bloch vectors describe qubits only", ErrorCode::DimensionMismatch);
    const std::vector<double> w = b->numbers();
    if (w.size() != 3) fail(b->path(), "expected three components", ErrorCode::DimensionMismatch);
    return at_path(b->path(), [&] { return state_from_bloch(Eigen::Vector3d(w[0], w[1], w[2])); });
  }
  if (auto p = node.opt("pure")) {
    const Vector psi = p->complex_vector();
    if (psi.size() != n) fail(p->path(), "expected " + std::to_string(n) + " amplitudes", ErrorCode::DimensionMismatch);
    return at_path(p->path(), [&] { return pure_state(psi); });
  }
  const Node mm = node.at("maximally_mixed");
  if (!mm.boolean()) fail(mm.path(), "only true is meaningful");
  return maximally_mixed(n);
}

RadialDistribution parse_grid(const Node& node) {
  node.require_object();
  return at_path(node.path(), [&] {
    if (auto p = node.opt("points")) {
      const std::vector<double> g = p->numbers();
      return RadialDistribution(g, std::vector<double>(g.size(), 0.0));
    }
    if (auto e = node.opt("edges")) {
      const std::vector<double> edges = e->numbers();
      if (edges.size() < 2) fail(e->path(), "need at least two edges");
      return RadialDistribution::from_edges(edges, std::vector<double>(edges.size() - 1, 0.0));
    }
    const double k_min = node.at("k_min").non_negative();
    const double k_max = node.at("k_max").positive();
    const std::size_t bins = node.at("bins").uint();
    if (bins == 0) fail(node.path() + ".bins", "must be positive");
    if (!(k_max > k_min)) fail(node.path() + ".k_max", "must exceed k_min");
    return RadialDistribution::uniform(k_min, k_max, bins);
  });
}

RadialDistribution parse_distribution(const Node& node, const RadialDistribution& grid, double mass) {
  node.require_object();
  const std::string kind = node.at("kind").string();
  return at_path(node.path(), [&]() -> RadialDistribution {
    if (kind == "zero") return grid.with_density(std::vector<double>(grid.bins(), 0.0));
    if (kind == "constant") {
      return grid.with_density(std::vector<double>(grid.bins(), node.at("value").non_negative()));
    }
    if (kind == "planck") return planck(node.at("temperature").number(), grid);
    if (kind == "boltzmann") {
      return boltzmann(node.at("beta").positive(), mass, node.at("n_total").positive(), grid);
    }
    if (kind == "table") {
      const Node d = node.at("density");
      std::vector<double> density = d.numbers();
      if (density.size() != grid.bins()) {
        fail(d.path(), "expected " + std::to_string(grid.bins()) + " densities, one per bin", ErrorCode::GridMismatch);
      }
      for (std::size_t b = 0; b < density.size(); ++b) d[b].non_negative();
      return grid.with_density(std::move(density));
    }
    fail(node.path() + ".kind", "unknown distribution kind '" + kind + "'");
  });
}

std::vector<std::vector<double>> parse_channel_values(const Node& node, std::size_t channels, std::size_t intervals,
                                                      bool non_negative) {
  std::vector<std::vector<double>> out(channels, std::vector<double>(intervals, 0.0));
  if (node.raw().is_number()) {
    const double v = non_negative ? node.non_negative() : node.number();
    for (auto& c : out) std::fill(c.begin(), c.end(), v);
    return out;
  }
  if (node.size() != channels) {
    fail(node.path(), "expected " + std::to_string(channels) + " channels, found " + std::to_string(node.size()),
         ErrorCode::DimensionMismatch);
  }
  for (std::size_t l = 0; l < channels; ++l) {
    const Node c = node[l];
    if (c.raw().is_number()) {
      std::fill(out[l].begin(), out[l].end(), non_negative ? c.non_negative() : c.number());
      continue;
    }
    if (c.size() != intervals) {
      fail(c.path(), "expected " + std::to_string(intervals) + " interval values, found " + std::to_string(c.size()),
           ErrorCode::GridMismatch);
    }
    for (std::size_t k = 0; k < intervals; ++k) out[l][k] = non_negative ? c[k].non_negative() : c[k].number();
  }
  return out;
}

GASettings parse_ga(const Node& node, std::optional<double>& threshold) {
  node.require_object();
  GASettings s;
  if (auto v = node.opt("pop_size")) s.pop_size = v->uint();
  if (auto v = node.opt("generations")) s.generations = v->uint();
  if (auto v = node.opt("mutation_rate")) s.mutation_rate = v->number();
  if (auto v = node.opt("mutation_sigma")) s.mutation_sigma = v->number();
  if (auto v = node.opt("crossover_rate")) s.crossover_rate = v->number();
  if (auto v = node.opt("tournament_k")) s.tournament_k = v->uint();
  if (auto v = node.opt("elitism")) s.elitism = v->uint();
  if (auto v = node.opt("n_max")) s.n_max = v->non_negative();
  if (auto v = node.opt("u_max")) s.u_max = v->non_negative();
  if (auto v = node.opt("include_zero_genome")) s.include_zero_genome = v->boolean();
  if (auto v = node.opt("parallel")) s.exec = v->boolean() ? Execution::Parallel : Execution::Serial;
  if (auto v = node.opt("threshold")) threshold = v->non_negative();
  at_path(node.path(), [&] {
    s.validate();
    return 0;
  });
  return s;
}

LandscapeSettings parse_landscape(const Node& node) {
  node.require_object();
  LandscapeSettings s;
  if (auto v = node.opt("restarts")) s.restarts = v->uint();
  if (auto v = node.opt("lambda")) s.lambda = static_cast<Eigen::Index>(v->uint());
  if (auto v = node.opt("cluster_tol")) s.cluster_tol = v->positive();
  if (auto v = node.opt("stationary_tol")) s.stationary_tol = v->positive();
  if (auto v = node.opt("stat_tol")) s.optimizer.stat_tol = v->positive();
  if (auto v = node.opt("max_iterations")) s.optimizer.max_iterations = v->uint();
  if (auto v = node.opt("hessian_directions")) s.optimizer.hessian_directions = v->uint();
  if (auto v = node.opt("global_tol")) s.optimizer.global_tol = v->positive();
  if (auto v = node.opt("parallel")) s.exec = v->boolean() ? Execution::Parallel : Execution::Serial;
  return s;
}

ObjectiveSpec parse_objective(const Node& node, Eigen::Index n) {
  node.require_object();
  const std::string kind = node.at("kind").string();
  if (kind == "observable") return ObservableObjective{make_observable(node.at("observable").hermitian(n))};
  if (kind == "state_transfer") return StateTransferObjective{parse_state(node.at("target"), n)};
  if (kind == "map_match") {
    Superoperator target;
    if (auto u = node.opt("unitary")) {
      const Matrix um = u->matrix(n, n);
      if (!(um.adjoint() * um - Matrix::Identity(n, n)).isZero(1e-10)) fail(u->path(), "matrix is not unitary");
      target.matrix = Eigen::kroneckerProduct(um.conjugate(), um).eval();
    } else {
      target.matrix = node.at("superoperator").matrix(n * n, n * n);
    }
    return at_path(node.path(), [&] { return ObjectiveSpec{make_map_objective(std::move(target))}; });
  }
  fail(node.path() + ".kind", "unknown objective kind '" + kind + "'");
}

Scenario parse(const json& doc) {
  const Node root(doc, "");
  if (!doc.is_object()) fail("(document)", "expected a JSON object");
  const std::string schema = root.at("schema").string();
  if (schema != kScenarioSchema) {
    fail("schema", "unsupported schema '" + schema + "', expected '" + kScenarioSchema + "'");
  }

  Scenario s;
  if (auto v = root.opt("seed")) s.seed = v->uint();

  const Node sys = root.at("system");
  const std::uint64_t dim = sys.at("dim").uint();
  if (dim == 0 || dim > 64) fail("system.dim", "must lie in [1, 64]");
  const auto n = static_cast<Eigen::Index>(dim);
  s.dim = n;
  if (sys.has("energies") == sys.has("h0")) fail("system", "give exactly one of energies or h0");
  if (auto e = sys.opt("energies")) {
    const std::vector<double> eps = e->numbers();
    if (static_cast<Eigen::Index>(eps.size()) != n) {
      fail(e->path(), "expected " + std::to_string(n) + " energies, found " + std::to_string(eps.size()),
           ErrorCode::DimensionMismatch);
    }
    s.system.h0 = Eigen::Map<const RealVector>(eps.data(), n).cast<Complex>().asDiagonal();
  } else {
    s.system.h0 = sys.at("h0").hermitian(n);
  }
  if (auto h = sys.opt("h_eff")) s.system.h_eff = h->hermitian(n);
  if (auto q = sys.opt("couplings")) {
    for (std::size_t l = 0; l < q->size(); ++l) s.system.couplings.push_back((*q)[l].hermitian(n));
  }

  const Node ctl = root.at("controls");
  if (ctl.has("times")) {
    s.schedule.times = ctl.at("times").numbers();
  } else {
    const double duration = ctl.at("duration").positive();
    const std::uint64_t steps = ctl.at("steps").uint();
    if (steps == 0) fail("controls.steps", "must be positive");
    s.schedule.times = ControlSchedule::uniform_times(duration, steps);
  }
  at_path("controls.times", [&] {
    ControlSchedule probe;
    probe.times = s.schedule.times;
    probe.validate(0);
    return 0;
  });
  const std::size_t intervals = s.schedule.intervals();
  const std::size_t channels = s.system.couplings.size();
  if (auto c = ctl.opt("coherent")) {
    s.schedule.coherent = parse_channel_values(*c, channels, intervals, false);
  } else {
    s.schedule.coherent.assign(channels, std::vector<double>(intervals, 0.0));
  }

  if (auto env = root.opt("environment")) {
    const std::string kind = env->at("kind").string();
    if (kind == "none") {
      s.environment = EnvironmentKind::None;
    } else if (kind == "radiation" || kind == "medium") {
      const Observable h0 = make_observable(s.system.h0);
      s.grid = parse_grid(env->at("grid"));
      double mass = 1.0;
      if (kind == "radiation") {
        s.environment = EnvironmentKind::Radiation;
        const Observable mu = make_observable(env->at("dipole").hermitian(n));
        FormFactor g = FormFactor::flat(1.0);
        if (auto ff = env->opt("form_factor")) {
          if (auto g0 = ff->opt("g0")) {
            g = FormFactor::flat(g0->number());
          } else {
            const Node table = ff->at("table");
            std::vector<double> ks, gs;
            for (std::size_t i = 0; i < table.size(); ++i) {
              if (table[i].size() != 2) fail(table[i].path(), "expected a [k, g] pair");
              ks.push_back(table[i][0].non_negative());
              gs.push_back(table[i][1].number());
            }
            g = at_path(table.path(), [&] { return FormFactor::tabulated(ks, gs); });
          }
        }
        s.system.environment = RadiationEnvironment{transition_decomposition(h0, mu), g};
      } else {
        s.environment = EnvironmentKind::Medium;
        mass = env->at("mass").positive();
        const Matrix amps = env->at("amplitudes").matrix(n, n);
        s.system.environment = MediumEnvironment{transition_structure(h0), MediumCoupling::constant(mass, amps)};
      }
      if (auto d = env->opt("distribution")) {
        if (d->raw().is_array()) {
          if (d->size() != intervals) {
            fail(d->path(), "expected one distribution per interval (" + std::to_string(intervals) + ")",
                 ErrorCode::GridMismatch);
          }
          for (std::size_t k = 0; k < intervals; ++k) {
            s.schedule.environment.push_back(parse_distribution((*d)[k], *s.grid, mass));
          }
        } else {
          s.schedule.environment.push_back(parse_distribution(*d, *s.grid, mass));
        }
      }
    } else {
      fail(env->path() + ".kind", "unknown environment kind '" + kind + "'");
    }
  }

  if (auto st = root.opt("initial_state")) s.initial_state = parse_state(*st, n);
  if (auto obj = root.opt("objective")) s.objective = parse_objective(*obj, n);

  if (auto w = root.opt("weights")) {
    if (auto a = w->opt("alpha")) s.weights.alpha = parse_channel_values(*a, channels, intervals, true);
    if (auto b = w->opt("beta")) {
      if (!s.grid) fail(b->path(), "beta weights need an environment grid", ErrorCode::GridMismatch);
      if (b->raw().is_number()) {
        s.weights.beta.assign(s.grid->bins(), b->non_negative());
      } else {
        if (b->size() != s.grid->bins()) {
          fail(b->path(), "expected " + std::to_string(s.grid->bins()) + " weights, one per bin",
               ErrorCode::GridMismatch);
        }
        for (std::size_t i = 0; i < b->size(); ++i) s.weights.beta.push_back((*b)[i].non_negative());
      }
    }
  }

  if (auto opt = root.opt("optimizer")) {
    if (auto ga = opt->opt("ga")) {
      s.ga = parse_ga(*ga, s.ga_threshold);
      if (s.ga->u_max && channels == 0) fail(ga->path() + ".u_max", "no coherent coupling channels to optimize");
    }
    if (auto ls = opt->opt("landscape")) s.landscape = parse_landscape(*ls);
  }

  if (auto t1 = root.opt("theorem1")) {
    if (auto t = t1->opt("target")) s.theorem1.target = parse_state(*t, n);
    if (auto b = t1->opt("basis")) s.theorem1.basis = b->matrix(n, n);
    if (auto k = t1->opt("samples")) s.theorem1.samples = k->uint();
  }

  if (auto out = root.opt("output")) {
    if (auto r = out->opt("record_every")) s.output.record_every = r->uint();
    if (auto e = out->opt("elements")) {
      for (std::size_t i = 0; i < e->size(); ++i) {
        const Node pair = (*e)[i];
        if (pair.size() != 2) fail(pair.path(), "expected an [i, j] pair");
        const auto r = static_cast<Eigen::Index>(pair[0].uint());
        const auto c = static_cast<Eigen::Index>(pair[1].uint());
        if (r >= n || c >= n) fail(pair.path(), "index outside the system dimension", ErrorCode::DimensionMismatch);
        s.output.elements.emplace_back(r, c);
      }
    }
  }

  s.override_seed(s.seed);
  return s;
}

}  // namespace

ControlProblem Scenario::control_problem() const {
  if (!initial_state) fail("initial_state", "required by the genetic algorithm");
  if (!objective) fail("objective", "required by the genetic algorithm");
  if (!grid) fail("environment.grid", "required by the genetic algorithm");
  if (std::holds_alternative<MapMatchObjective>(*objective)) {
    fail("objective.kind", "the genetic algorithm supports observable and state_transfer objectives");
  }
  ControlSchedule sched = schedule;
  sched.environment = {grid->with_density(std::vector<double>(grid->bins(), 0.0))};
  return ControlProblem{*initial_state, system, sched, *grid, *objective, weights};
}

void Scenario::override_seed(std::uint64_t value) {
  seed = value;
  if (ga) ga->seed = value;
  if (landscape) landscape->seed = value;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("(document): malformed JSON: ") + e.what());
  }
  return parse(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "(document): cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace icectl
