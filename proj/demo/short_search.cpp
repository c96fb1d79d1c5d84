// A short GA search for a balanced 6-variable function of high nonlinearity,
// comparing map-of-ones against one-point crossover over a few seeds.

#include <cstdio>
#include <vector>

#include "balcross/balcross.hpp"

int main() {
  using namespace balcross;
  ExperimentSpec spec;
  spec.problem = BalNL{6};
  spec.crossovers = {CrossoverKind::parse("moo"), CrossoverKind::parse("op")};
  spec.runs = 8;
  spec.max_evaluations = 20000;
  spec.master_seed = 1;

  const auto rows = run_experiment(spec);
  const auto groups = group_by_operator(rows);
  for (const auto& [op, group] : groups) {
    std::printf("%s\n", summary_line(op, summarize(best_fitness_column(group))).c_str());
  }
  const auto cmp = compare_results(groups[0].second, groups[1].second);
  std::printf("U = %g, p = %.4g, %s\n", cmp.test.u_statistic, cmp.test.p_value,
              cmp.test.significant ? "significant" : "not significant");

  const TruthTable best = TruthTable::from_hex(rows.front().best_genotype, 6);
  std::printf("best moo function (run 0): %s, weight %zu, nonlinearity %lld\n", best.hex().c_str(), best.weight(),
              static_cast<long long>(nonlinearity(best)));
}
