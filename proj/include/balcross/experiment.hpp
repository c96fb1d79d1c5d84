// experiment.hpp
//
// Batch runs and result files.
//
// An experiment executes R independent runs for each listed crossover
// operator. Run r of operator number i uses seed derive_seed(master, {i, r}),
// so results do not depend on how runs are spread over worker threads. Rows
// are written in (operator, run) order.
//
// Result CSV header:
//   problem,operator,run,seed,best_fitness,evals_to_best,success,best_genotype

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "balcross/engine.hpp"
#include "balcross/operators.hpp"
#include "balcross/random.hpp"
#include "balcross/stats.hpp"

namespace balcross {

inline constexpr const char* kResultHeader =
    "problem,operator,run,seed,best_fitness,evals_to_best,success,best_genotype";

/// Raised for malformed experiment settings; `key` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Raised when a result file does not follow the CSV schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  Problem problem = BalNL{6};
  std::vector<CrossoverKind> crossovers;
  std::size_t runs = 50;
  std::size_t population_size = 50;
  std::size_t tournament_size = 3;
  double mutation_prob = 0.7;
  std::uint64_t max_evaluations = 500000;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (runs < 1) throw ConfigError("runs", "must be at least 1");
    if (crossovers.empty()) throw ConfigError("crossover", "at least one operator required");
    if (threads < 1) throw ConfigError("threads", "must be at least 1");
    try {
      (void)ProblemModel(problem);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("problem", e.what());
    }
    if (tournament_size < 2) throw ConfigError("tournament", "must be at least 2");
    if (population_size < tournament_size)
      throw ConfigError("pop-size", "must be at least the tournament size");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
      throw ConfigError("mutation-prob", "must lie in [0, 1]");
  }

  GAConfig config_for(std::size_t kind_index, std::size_t run_index) const {
    GAConfig cfg;
    cfg.problem = problem;
    cfg.crossover = crossovers.at(kind_index);
    cfg.population_size = population_size;
    cfg.tournament_size = tournament_size;
    cfg.mutation_prob = mutation_prob;
    cfg.max_evaluations = max_evaluations;
    cfg.seed = derive_seed(master_seed, {kind_index, run_index});
    return cfg;
  }
};

struct ResultRow {
  std::string problem;
  std::string op;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double best_fitness = 0;
  std::uint64_t evals_to_best = 0;
  bool success = false;
  std::string best_genotype;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Integral values print without a fraction; others with round-trip precision.
inline std::string format_fitness(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else {
    std::snprintf(buf, sizeof buf, "%.17g", v);
  }
  return buf;
}

/// Executes the experiment. `progress` (may be null) receives each finished
/// row; it is called under a lock, possibly from worker threads.
template <class Progress = std::nullptr_t>
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, Progress progress = nullptr) {
  spec.validate();
  const std::string problem_name = ProblemModel(spec.problem).name();
  const std::size_t total = spec.crossovers.size() * spec.runs;
  std::vector<ResultRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const std::size_t kind = job / spec.runs;
      const std::size_t run = job % spec.runs;
      try {
        const GAConfig cfg = spec.config_for(kind, run);
        const RunResult res = run_ga(cfg);
        ResultRow& row = rows[job];
        row.problem = problem_name;
        row.op = cfg.crossover.code();
        row.run = run;
        row.seed = cfg.seed;
        row.best_fitness = res.best_fitness;
        row.evals_to_best = res.evaluations_to_best;
        row.success = res.success;
        row.best_genotype = res.best_genotype;
        if constexpr (!std::is_same_v<Progress, std::nullptr_t>) {
          std::lock_guard lock(mutex);
          progress(row);
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(spec.threads, total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << r.problem << ',' << r.op << ',' << r.run << ',' << r.seed << ',' << format_fitness(r.best_fitness)
        << ',' << r.evals_to_best << ',' << (r.success ? 1 : 0) << ',' << r.best_genotype << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_number(const std::string& text, const std::string& column, std::size_t line_no) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !in.eof())
    throw SchemaError("line " + std::to_string(line_no) + ": column '" + column +
                      "' is not a number: '" + text + "'");
  return value;
}

}  // namespace detail

/// Reads a result CSV. Columns are located by header name, so files with
/// extra or reordered columns are accepted; missing columns are an error.
inline std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty result file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);
  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_problem = column("problem"), c_op = column("operator"), c_run = column("run"),
                    c_seed = column("seed"), c_fit = column("best_fitness"),
                    c_evals = column("evals_to_best"), c_success = column("success"),
                    c_geno = column("best_genotype");

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != header.size())
      throw SchemaError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(f.size()));
    ResultRow r;
    r.problem = f[c_problem];
    r.op = f[c_op];
    r.run = detail::parse_number<std::size_t>(f[c_run], "run", line_no);
    r.seed = detail::parse_number<std::uint64_t>(f[c_seed], "seed", line_no);
    r.best_fitness = detail::parse_number<double>(f[c_fit], "best_fitness", line_no);
    r.evals_to_best = detail::parse_number<std::uint64_t>(f[c_evals], "evals_to_best", line_no);
    if (f[c_success] != "0" && f[c_success] != "1")
      throw SchemaError("line " + std::to_string(line_no) + ": success must be 0 or 1");
    r.success = f[c_success] == "1";
    r.best_genotype = f[c_geno];
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw SchemaError("result file has no data rows");
  return rows;
}

inline std::vector<double> best_fitness_column(const std::vector<ResultRow>& rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.best_fitness);
  return out;
}

/// Groups rows by operator code, keeping first-appearance order.
inline std::vector<std::pair<std::string, std::vector<ResultRow>>> group_by_operator(
    const std::vector<ResultRow>& rows) {
  std::vector<std::pair<std::string, std::vector<ResultRow>>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == r.op; });
    if (it == groups.end()) {
      groups.emplace_back(r.op, std::vector<ResultRow>{});
      it = groups.end() - 1;
    }
    it->second.push_back(r);
  }
  return groups;
}

struct Comparison {
  std::string label_a;
  std::string label_b;
  SampleSummary summary_a;
  SampleSummary summary_b;
  TestReport test;
  Objective objective = Objective::Maximize;

  /// Label of the sample with the better median, or empty when medians tie.
  std::string better_label() const {
    if (summary_a.median == summary_b.median) return {};
    const bool a_higher = summary_a.median > summary_b.median;
    return (a_higher == (objective == Objective::Maximize)) ? label_a : label_b;
  }
};

/// Orientation follows the problem name: "oa-*" files are minimization.
inline Objective objective_for_problem_name(const std::string& name) {
  return name.rfind("oa-", 0) == 0 ? Objective::Minimize : Objective::Maximize;
}

inline std::string label_for(const std::vector<ResultRow>& rows) {
  std::string label = rows.front().op;
  for (const auto& r : rows)
    if (r.op != label) return "mixed";
  return label;
}

inline Comparison compare_results(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  if (a.empty() || b.empty()) throw SchemaError("cannot compare an empty result set");
  Comparison c;
  c.label_a = label_for(a);
  c.label_b = label_for(b);
  const auto fa = best_fitness_column(a);
  const auto fb = best_fitness_column(b);
  c.summary_a = summarize(fa);
  c.summary_b = summarize(fb);
  c.test = mann_whitney(fa, fb);
  c.objective = objective_for_problem_name(a.front().problem);
  return c;
}

/// operator_a,operator_b,u,p,significant
inline std::string test_report_csv(const Comparison& c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g,%.6g,%d", c.test.u_statistic, c.test.p_value, c.test.significant ? 1 : 0);
  return c.label_a + "," + c.label_b + "," + buf;
}

inline std::string summary_line(const std::string& label, const SampleSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-8s n=%-4zu min=%-10g q1=%-10g median=%-10g q3=%-10g max=%g", label.c_str(),
                s.count, s.min, s.first_quartile, s.median, s.third_quartile, s.max);
  return buf;
}

}  // namespace balcross
