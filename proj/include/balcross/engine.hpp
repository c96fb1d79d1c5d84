// engine.hpp
//
// Steady-state GA shared by the three benchmark problems.
//
// One iteration: deterministic tournament picks the best two of t distinct
// random individuals; one child is bred by the configured crossover (column
// by column for orthogonal arrays) and mutated (swap mutation for balanced
// operators, single bit flip for one-point); the child is evaluated and, if
// strictly better than both parents, replaces a random individual other than
// the current population best. The run stops once the evaluation budget is
// spent.
//
// One-point runs use the penalized fitness; balanced runs drop the penalty.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "balcross/bits.hpp"
#include "balcross/boolfn.hpp"
#include "balcross/encodings.hpp"
#include "balcross/oa.hpp"
#include "balcross/operators.hpp"
#include "balcross/random.hpp"

namespace balcross {

enum class Objective { Maximize, Minimize };

/// Highly nonlinear balanced Boolean functions of n variables.
struct BalNL {
  int n = 6;
  friend bool operator==(const BalNL&, const BalNL&) = default;
};

/// Bent functions of n variables (n even).
struct Bent {
  int n = 6;
  friend bool operator==(const Bent&, const Bent&) = default;
};

/// Binary orthogonal arrays with N = 2^n rows.
struct BinOA {
  OAParameters params;
  friend bool operator==(const BinOA&, const BinOA&) = default;
};

using Problem = std::variant<BalNL, Bent, BinOA>;

inline constexpr int kMaxBooleanVars = 16;

/// Best known nonlinearity of balanced functions, used as the success target.
/// n = 8 is an open case; 116 is the customary target there.
inline std::optional<std::int64_t> balanced_nl_target(int n) {
  static constexpr std::int64_t kTargets[] = {0, 0, 0, 2, 4, 12, 26, 56, 116, 242, 492};
  if (n < 1 || n > 10) return std::nullopt;
  return kTargets[n];
}

/// Per-problem quantities the engine needs: chromosome shape, objective,
/// fitness evaluation and the success predicate.
class ProblemModel {
 public:
  explicit ProblemModel(Problem problem) : problem_(std::move(problem)) { validate(); }

  const Problem& problem() const noexcept { return problem_; }

  /// "balnl-6", "bent-8", "oa-16-8-2-4".
  std::string name() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, BalNL>) {
            return "balnl-" + std::to_string(p.n);
          } else if constexpr (std::is_same_v<T, Bent>) {
            return "bent-" + std::to_string(p.n);
          } else {
            return "oa-" + std::to_string(p.params.rows) + "-" + std::to_string(p.params.columns) +
                   "-" + std::to_string(p.params.strength) + "-" + std::to_string(p.params.lambda);
          }
        },
        problem_);
  }

  Objective objective() const {
    return std::holds_alternative<BinOA>(problem_) ? Objective::Minimize : Objective::Maximize;
  }

  std::size_t column_count() const {
    if (const auto* oa = std::get_if<BinOA>(&problem_)) return oa->params.columns;
    return 1;
  }

  std::size_t column_length() const {
    if (const auto* oa = std::get_if<BinOA>(&problem_)) return oa->params.rows;
    return std::size_t{1} << boolean_vars();
  }

  /// Weight every column carries under balanced operators.
  std::size_t column_weight() const {
    if (const auto* bent = std::get_if<Bent>(&problem_)) return bent_weight(bent->n);
    return column_length() / 2;
  }

  /// Default mutation probability: 0.7 for the Boolean problems, 0.2 for OA.
  double default_mutation_prob() const { return std::holds_alternative<BinOA>(problem_) ? 0.2 : 0.7; }

  bool better(double a, double b) const { return objective() == Objective::Maximize ? a > b : a < b; }

  std::optional<double> target() const {
    return std::visit(
        [](const auto& p) -> std::optional<double> {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, BalNL>) {
            const auto t = balanced_nl_target(p.n);
            return t ? std::optional<double>(static_cast<double>(*t)) : std::nullopt;
          } else if constexpr (std::is_same_v<T, Bent>) {
            return static_cast<double>(covering_bound(p.n));
          } else {
            return 0.0;
          }
        },
        problem_);
  }

  bool is_success(double fitness) const {
    const auto t = target();
    if (!t) return false;
    return objective() == Objective::Maximize ? fitness >= *t : fitness == *t;
  }

  /// Evaluates a chromosome; `scratch` is reusable working storage.
  double evaluate(std::span<const BitVector> columns, bool penalized,
                  std::vector<std::int32_t>& scratch) const {
    if (columns.size() != column_count()) throw std::invalid_argument("wrong number of columns");
    for (const auto& c : columns)
      if (c.size() != column_length()) throw std::invalid_argument("wrong column length");

    if (const auto* oa = std::get_if<BinOA>(&problem_)) {
      double fit = detail::total_deviation(columns, oa->params.strength, oa->params.lambda);
      if (penalized) fit += static_cast<double>(detail::unbalancedness(columns));
      return fit;
    }
    const BitVector& table = columns.front();
    const auto half = static_cast<std::int64_t>(table.size() / 2);
    const std::int64_t nl = half - detail::spectral_radius(table, scratch) / 2;
    if (!penalized) return static_cast<double>(nl);
    const auto target_weight = static_cast<std::int64_t>(column_weight());
    const auto w = static_cast<std::int64_t>(hamming_weight(table));
    return static_cast<double>(nl - (target_weight > w ? target_weight - w : w - target_weight));
  }

  /// Hex of each column, joined with ':'.
  static std::string serialize(std::span<const BitVector> columns) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i > 0) out.push_back(':');
      out += to_hex(columns[i]);
    }
    return out;
  }

 private:
  int boolean_vars() const {
    if (const auto* b = std::get_if<BalNL>(&problem_)) return b->n;
    return std::get<Bent>(problem_).n;
  }

  void validate() const {
    if (const auto* b = std::get_if<BalNL>(&problem_)) {
      if (b->n < 1 || b->n > kMaxBooleanVars)
        throw std::invalid_argument("balnl: n must be in [1, " + std::to_string(kMaxBooleanVars) + "]");
    } else if (const auto* bent = std::get_if<Bent>(&problem_)) {
      if (bent->n < 2 || bent->n > kMaxBooleanVars || bent->n % 2 != 0)
        throw std::invalid_argument("bent: n must be even and in [2, " +
                                    std::to_string(kMaxBooleanVars) + "]");
    } else {
      const auto& p = std::get<BinOA>(problem_).params;
      (void)OAParameters::make(p.rows, p.columns, p.strength, p.lambda);
      if (p.rows < 2 || (p.rows & (p.rows - 1)) != 0)
        throw std::invalid_argument("oa: rows must be a power of two (N = 2^n)");
      if (p.columns == 0) throw std::invalid_argument("oa: at least one column required");
    }
  }

  Problem problem_;
};

struct GAConfig {
  Problem problem = BalNL{6};
  CrossoverKind crossover = CrossoverKind(CrossoverKind::Tag::MapOfOnes);
  std::size_t population_size = 50;
  std::size_t tournament_size = 3;
  double mutation_prob = 0.7;
  std::uint64_t max_evaluations = 500000;
  std::uint64_t seed = 0;

  /// Experimental defaults: P = 50, t = 3, 500000 evaluations, and the
  /// problem's default mutation probability.
  static GAConfig defaults_for(Problem problem, CrossoverKind crossover, std::uint64_t seed = 0) {
    GAConfig cfg;
    cfg.mutation_prob = ProblemModel(problem).default_mutation_prob();
    cfg.problem = std::move(problem);
    cfg.crossover = crossover;
    cfg.seed = seed;
    return cfg;
  }

  void validate() const {
    if (tournament_size < 2) throw std::invalid_argument("tournament size must be at least 2");
    if (population_size < tournament_size)
      throw std::invalid_argument("population size must be at least the tournament size");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
      throw std::invalid_argument("mutation probability must lie in [0, 1]");
    (void)ProblemModel(problem);
  }
};

struct Individual {
  std::vector<BitVector> columns;
  double fitness = 0;
};

struct RunResult {
  double best_fitness = 0;
  std::string best_genotype;
  std::uint64_t evaluations_to_best = 0;
  bool success = false;
  std::uint64_t run_seed = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Picks `tournament_size` distinct individuals uniformly and returns the
/// indices of the best two. Ties are broken uniformly at random.
template <ChoiceSource Choices>
std::pair<std::size_t, std::size_t> tournament_select(std::span<const double> fitness,
                                                      std::size_t tournament_size, Objective objective,
                                                      Choices& choices) {
  if (tournament_size < 2 || tournament_size > fitness.size())
    throw std::invalid_argument("tournament size must be in [2, population size]");
  // Rejection sampling yields a uniformly random ordered sample, so a stable
  // sort on fitness breaks ties uniformly.
  std::vector<std::size_t> sample;
  sample.reserve(tournament_size);
  while (sample.size() < tournament_size) {
    const std::size_t pick = choices.below(fitness.size());
    if (std::find(sample.begin(), sample.end(), pick) == sample.end()) sample.push_back(pick);
  }
  std::stable_sort(sample.begin(), sample.end(), [&](std::size_t x, std::size_t y) {
    return objective == Objective::Maximize ? fitness[x] > fitness[y] : fitness[x] < fitness[y];
  });
  return {sample[0], sample[1]};
}

class SteadyStateGA {
 public:
  explicit SteadyStateGA(GAConfig config)
      : config_(std::move(config)), model_(config_.problem), engine_(config_.seed) {
    config_.validate();
  }

  SteadyStateGA(const SteadyStateGA&) = delete;
  SteadyStateGA& operator=(const SteadyStateGA&) = delete;

  /// Creates and evaluates P individuals; the evaluation counter becomes P.
  void init_population() {
    population_.clear();
    evaluations_ = 0;
    has_best_ = false;
    const std::size_t len = model_.column_length();
    for (std::size_t i = 0; i < config_.population_size; ++i) {
      Individual ind;
      ind.columns.reserve(model_.column_count());
      for (std::size_t c = 0; c < model_.column_count(); ++c) {
        if (config_.crossover.balanced()) {
          ind.columns.push_back(random_balanced(len, model_.column_weight(), choices_).bits());
        } else {
          BitVector bits(len);
          for (auto& b : bits) b = choices_.coin() ? 1 : 0;
          ind.columns.push_back(std::move(bits));
        }
      }
      ind.fitness = evaluate(ind.columns);
      record(ind);
      population_.push_back(std::move(ind));
    }
    fitness_.resize(population_.size());
    for (std::size_t i = 0; i < population_.size(); ++i) fitness_[i] = population_[i].fitness;
  }

  /// One selection / breeding / replacement iteration (one evaluation).
  void step() {
    if (population_.empty()) throw std::logic_error("step() before init_population()");
    const auto [a, b] = tournament_select(fitness_, config_.tournament_size, model_.objective(), choices_);
    const Individual& p1 = population_[a];
    const Individual& p2 = population_[b];

    Individual child;
    child.columns.reserve(p1.columns.size());
    for (std::size_t c = 0; c < p1.columns.size(); ++c) {
      BitVector col = crossover(config_.crossover, p1.columns[c], p2.columns[c], choices_);
      if (config_.crossover.balanced()) {
        swap_mutate(col, config_.mutation_prob, choices_);
      } else {
        bit_flip_mutate(col, config_.mutation_prob, choices_);
      }
      child.columns.push_back(std::move(col));
    }
    child.fitness = evaluate(child.columns);
    record(child);

    if (model_.better(child.fitness, p1.fitness) && model_.better(child.fitness, p2.fitness)) {
      const std::size_t best = best_index();
      std::size_t victim = choices_.below(population_.size() - 1);
      if (victim >= best) ++victim;
      fitness_[victim] = child.fitness;
      population_[victim] = std::move(child);
    }
  }

  bool finished() const { return evaluations_ >= config_.max_evaluations; }

  void run() {
    init_population();
    while (!finished()) step();
  }

  RunResult result() const {
    if (!has_best_) throw std::logic_error("result() before init_population()");
    RunResult r;
    r.best_fitness = best_ever_.fitness;
    r.best_genotype = ProblemModel::serialize(best_ever_.columns);
    r.evaluations_to_best = best_at_;
    r.success = model_.is_success(best_ever_.fitness);
    r.run_seed = config_.seed;
    return r;
  }

  const GAConfig& config() const noexcept { return config_; }
  const ProblemModel& model() const noexcept { return model_; }
  const std::vector<Individual>& population() const noexcept { return population_; }
  const Individual& best_ever() const { return best_ever_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }

  /// Index of the population best (lowest index among ties).
  std::size_t best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fitness_.size(); ++i)
      if (model_.better(fitness_[i], fitness_[best])) best = i;
    return best;
  }

 private:
  double evaluate(std::span<const BitVector> columns) {
    ++evaluations_;
    return model_.evaluate(columns, !config_.crossover.balanced(), scratch_);
  }

  void record(const Individual& ind) {
    if (!has_best_ || model_.better(ind.fitness, best_ever_.fitness)) {
      best_ever_ = ind;
      best_at_ = evaluations_;
      has_best_ = true;
    }
  }

  GAConfig config_;
  ProblemModel model_;
  Engine engine_;
  RngChoices<Engine> choices_{engine_};
  std::vector<Individual> population_;
  std::vector<double> fitness_;
  std::vector<std::int32_t> scratch_;
  Individual best_ever_;
  std::uint64_t best_at_ = 0;
  std::uint64_t evaluations_ = 0;
  bool has_best_ = false;
};

/// Runs one GA to completion. Deterministic given the config (including seed).
inline RunResult run_ga(const GAConfig& config) {
  SteadyStateGA ga(config);
  ga.run();
  return ga.result();
}

}  // namespace balcross
