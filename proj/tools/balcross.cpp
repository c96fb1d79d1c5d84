// Command-line front end: run experiments, compare result files, summarize.
//
//   balcross run --problem balnl --n 6 --crossover moo,op --runs 50 --out r.csv
//   balcross compare a.csv b.csv
//   balcross summary r.csv
//
// Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "balcross/balcross.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string problem = "balnl";
  std::optional<int> n;
  std::size_t oa_cols = 8;
  std::size_t oa_strength = 2;
  std::vector<std::string> crossover{"moo"};
  std::size_t pop_size = 50;
  std::size_t tournament = 3;
  std::uint64_t evals = 500000;
  std::optional<double> mutation_prob;
  std::size_t runs = 50;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::optional<unsigned> threads;
  bool progress = false;
};

unsigned default_threads() {
  if (const char* env = std::getenv("BALCROSS_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw balcross::ConfigError("threads", std::string("BALCROSS_THREADS is not a positive integer: '") + env + "'");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

balcross::Problem make_problem(const RunOptions& o) {
  if (o.problem == "balnl") return balcross::BalNL{o.n.value_or(6)};
  if (o.problem == "bent") return balcross::Bent{o.n.value_or(6)};
  if (o.problem == "oa") {
    const int n = o.n.value_or(4);
    if (n < 1 || n > 20) throw balcross::ConfigError("n", "OA row exponent must be in [1, 20]");
    try {
      return balcross::BinOA{balcross::OAParameters::make(std::size_t{1} << n, o.oa_cols, o.oa_strength)};
    } catch (const std::invalid_argument& e) {
      throw balcross::ConfigError("oa-strength", e.what());
    }
  }
  throw balcross::ConfigError("problem", "expected balnl, bent or oa, got '" + o.problem + "'");
}

balcross::ExperimentSpec make_spec(const RunOptions& o) {
  balcross::ExperimentSpec spec;
  spec.problem = make_problem(o);
  for (const auto& code : o.crossover) {
    try {
      spec.crossovers.push_back(balcross::CrossoverKind::parse(code));
    } catch (const std::invalid_argument& e) {
      throw balcross::ConfigError("crossover", e.what());
    }
  }
  spec.runs = o.runs;
  spec.population_size = o.pop_size;
  spec.tournament_size = o.tournament;
  spec.max_evaluations = o.evals;
  try {
    spec.mutation_prob = o.mutation_prob.value_or(balcross::ProblemModel(spec.problem).default_mutation_prob());
  } catch (const std::invalid_argument& e) {
    throw balcross::ConfigError("problem", e.what());
  }
  spec.master_seed = o.seed;
  spec.threads = o.threads ? *o.threads : default_threads();
  spec.validate();
  return spec;
}

// Applies key=value lines to options not already given on the command line.
// Keys are the long flag names without dashes; '#' starts a comment line.
void apply_config_file(CLI::App& cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = CLI::detail::trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw balcross::ConfigError(path + ":" + std::to_string(line_no), "expected key=value");
    const std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    if (key == "config" || key == "progress" || key == "help")
      throw balcross::ConfigError(key, "not allowed in a config file");
    CLI::Option* opt = nullptr;
    try {
      opt = cmd.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw balcross::ConfigError(key, "unknown key in " + path);
    }
    if (opt->count() > 0) continue;
    std::vector<std::string> parts;
    std::istringstream fields(value);
    for (std::string part; std::getline(fields, part, ',');) parts.push_back(CLI::detail::trim_copy(part));
    if (parts.size() > 1 && opt->get_items_expected_max() <= 1)
      throw balcross::ConfigError(key, "expects a single value");
    try {
      opt->add_result(parts);
      opt->run_callback();
    } catch (const CLI::ParseError& e) {
      throw balcross::ConfigError(key, e.what());
    }
  }
}

int do_run(const RunOptions& o) {
  const balcross::ExperimentSpec spec = make_spec(o);

  // Open the output before spending any compute on runs.
  std::ofstream file;
  if (o.out != "-") {
    file.open(o.out, std::ios::out | std::ios::trunc);
    if (!file) throw IoError("cannot open output file '" + o.out + "'");
  }
  std::ostream& out = o.out == "-" ? std::cout : file;

  const std::size_t total = spec.runs * spec.crossovers.size();
  std::size_t done = 0;
  const auto rows = balcross::run_experiment(spec, [&](const balcross::ResultRow& r) {
    ++done;
    if (o.progress)
      std::fprintf(stderr, "[%zu/%zu] %s run %zu: best %s%s\n", done, total, r.op.c_str(), r.run,
                   balcross::format_fitness(r.best_fitness).c_str(), r.success ? " (success)" : "");
  });
  balcross::write_results_csv(out, rows);
  out.flush();
  if (!out) throw IoError("failed writing results to '" + o.out + "'");
  return kExitOk;
}

std::vector<balcross::ResultRow> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open result file '" + path + "'");
  try {
    return balcross::read_results_csv(in);
  } catch (const balcross::SchemaError& e) {
    throw IoError(path + ": " + e.what());
  }
}

int do_compare(const std::string& path_a, const std::string& path_b) {
  const auto c = balcross::compare_results(load(path_a), load(path_b));
  std::cout << balcross::summary_line(c.label_a, c.summary_a) << '\n'
            << balcross::summary_line(c.label_b, c.summary_b) << '\n';
  std::printf("Mann-Whitney U = %g, two-sided p = %.6g (%s), %s at alpha = %g\n", c.test.u_statistic,
              c.test.p_value, c.test.exact ? "exact" : "normal approximation",
              c.test.significant ? "significant" : "not significant", balcross::kSignificanceLevel);
  const std::string better = c.better_label();
  if (c.test.significant && !better.empty()) {
    const std::string& worse = better == c.label_a ? c.label_b : c.label_a;
    std::printf("verdict: %s better, %s worse\n", better.c_str(), worse.c_str());
  } else {
    std::printf("verdict: no significant difference\n");
  }
  std::cout << "operator_a,operator_b,u,p,significant\n" << balcross::test_report_csv(c) << '\n';
  return kExitOk;
}

int do_summary(const std::string& path) {
  const auto rows = load(path);
  std::cout << "problem " << rows.front().problem << '\n';
  for (const auto& [op, group] : balcross::group_by_operator(rows)) {
    const auto fit = balcross::best_fitness_column(group);
    std::size_t hits = 0;
    for (const auto& r : group) hits += r.success ? 1 : 0;
    std::printf("%s success=%.1f%%\n", balcross::summary_line(op, balcross::summarize(fit)).c_str(),
                100.0 * static_cast<double>(hits) / static_cast<double>(group.size()));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced crossover experiments"};
  app.require_subcommand(1);

  RunOptions opts;
  auto* run = app.add_subcommand("run", "Execute R runs per crossover operator and write result CSV");
  std::string config_path;
  run->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  run->add_option("--problem", opts.problem, "balnl, bent or oa")->capture_default_str();
  run->add_option("--n", opts.n, "Boolean variables (balnl, bent) or log2 of OA rows");
  run->add_option("--oa-cols", opts.oa_cols, "OA columns k")->capture_default_str();
  run->add_option("--oa-strength", opts.oa_strength, "OA strength t")->capture_default_str();
  run->add_option("--crossover", opts.crossover, "Comma list of op, cb, zl, moo (suffix -s: shuffled)")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--pop-size", opts.pop_size, "Population size")->capture_default_str();
  run->add_option("--tournament", opts.tournament, "Tournament size")->capture_default_str();
  run->add_option("--evals", opts.evals, "Fitness evaluations per run")->capture_default_str();
  run->add_option("--mutation-prob", opts.mutation_prob, "Default 0.7 (balnl, bent) or 0.2 (oa)");
  run->add_option("--runs", opts.runs, "Runs per operator")->capture_default_str();
  run->add_option("--seed", opts.seed, "Master seed")->capture_default_str();
  run->add_option("--out", opts.out, "Output CSV ('-' for stdout)")->capture_default_str();
  run->add_option("--threads", opts.threads, "Worker threads (default: BALCROSS_THREADS or all cores)");
  run->add_flag("--progress", opts.progress, "Report each finished run on stderr");

  std::string cmp_a, cmp_b;
  auto* compare = app.add_subcommand("compare", "Mann-Whitney test on the best_fitness columns of two CSVs");
  compare->add_option("a", cmp_a, "First result CSV")->required();
  compare->add_option("b", cmp_b, "Second result CSV")->required();

  std::string summary_path;
  auto* summary = app.add_subcommand("summary", "Per-operator five-number summary and success rate");
  summary->add_option("file", summary_path, "Result CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) {
      if (!config_path.empty()) apply_config_file(*run, config_path);
      return do_run(opts);
    }
    if (*compare) return do_compare(cmp_a, cmp_b);
    return do_summary(summary_path);
  } catch (const balcross::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
