#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "balcross/engine.hpp"
#include "oracles.hpp"

namespace balcross {
namespace {

// Nonlinearity from the definition-level transform, independent of the engine.
std::int64_t naive_nl(const BitVector& table) {
  const auto w = testing::naive_walsh(table);
  std::int64_t peak = 0;
  for (auto v : w) peak = std::max<std::int64_t>(peak, std::abs(v));
  return static_cast<std::int64_t>(table.size() / 2) - peak / 2;
}

GAConfig small_config(Problem problem, const char* op, std::uint64_t evals, std::uint64_t seed) {
  GAConfig cfg = GAConfig::defaults_for(std::move(problem), CrossoverKind::parse(op), seed);
  cfg.max_evaluations = evals;
  return cfg;
}

BinOA oa_16_8_2() { return BinOA{OAParameters::make(16, 8, 2)}; }

TEST(ProblemModel, NamesAndShapes) {
  const ProblemModel balnl(BalNL{6}), bent(Bent{8}), oa(oa_16_8_2());
  EXPECT_EQ(balnl.name(), "balnl-6");
  EXPECT_EQ(bent.name(), "bent-8");
  EXPECT_EQ(oa.name(), "oa-16-8-2-4");
  EXPECT_EQ(balnl.column_length(), 64U);
  EXPECT_EQ(balnl.column_weight(), 32U);
  EXPECT_EQ(bent.column_length(), 256U);
  EXPECT_EQ(bent.column_weight(), 120U);
  EXPECT_EQ(oa.column_count(), 8U);
  EXPECT_EQ(oa.column_length(), 16U);
  EXPECT_EQ(oa.column_weight(), 8U);
  EXPECT_EQ(oa.objective(), Objective::Minimize);
  EXPECT_EQ(balnl.default_mutation_prob(), 0.7);
  EXPECT_EQ(oa.default_mutation_prob(), 0.2);
}

TEST(ProblemModel, TargetsAndSuccess) {
  EXPECT_EQ(*ProblemModel(BalNL{6}).target(), 26);
  EXPECT_EQ(*ProblemModel(BalNL{8}).target(), 116);
  EXPECT_FALSE(ProblemModel(BalNL{12}).target().has_value());
  EXPECT_FALSE(ProblemModel(BalNL{12}).is_success(1e9));
  EXPECT_EQ(*ProblemModel(Bent{6}).target(), 28);
  EXPECT_TRUE(ProblemModel(Bent{6}).is_success(28));
  EXPECT_FALSE(ProblemModel(Bent{6}).is_success(26));
  EXPECT_TRUE(ProblemModel(oa_16_8_2()).is_success(0));
  EXPECT_FALSE(ProblemModel(oa_16_8_2()).is_success(0.5));
}

TEST(ProblemModel, RejectsBadInstances) {
  EXPECT_THROW(ProblemModel(BalNL{0}), std::invalid_argument);
  EXPECT_THROW(ProblemModel(BalNL{17}), std::invalid_argument);
  EXPECT_THROW(ProblemModel(Bent{7}), std::invalid_argument);
  EXPECT_THROW(ProblemModel(BinOA{OAParameters::make(24, 4, 2)}), std::invalid_argument);
  EXPECT_THROW(ProblemModel(BinOA{OAParameters{16, 8, 2, 3}}), std::invalid_argument);
}

TEST(ProblemModel, EvaluateMatchesDefinitions) {
  std::mt19937_64 rng(31);
  std::vector<std::int32_t> scratch;
  const ProblemModel balnl(BalNL{6}), bent(Bent{6});
  for (int trial = 0; trial < 300; ++trial) {
    const BitVector f = testing::random_bits(64, rng);
    const auto nl = naive_nl(f);
    const auto w = static_cast<std::int64_t>(hamming_weight(f));
    const std::vector<BitVector> cols{f};
    ASSERT_EQ(balnl.evaluate(cols, false, scratch), nl);
    ASSERT_EQ(balnl.evaluate(cols, true, scratch), nl - std::abs(32 - w));
    ASSERT_EQ(bent.evaluate(cols, true, scratch), nl - std::abs(28 - w));
  }
}

TEST(ProblemModel, SerializeIsColumnHex) {
  const std::vector<BitVector> cols{parse_bit_string("0001000100011110"), parse_bit_string("1000")};
  EXPECT_EQ(ProblemModel::serialize(cols), "111e:8");
}

TEST(Tournament, FullTournamentPicksTopTwo) {
  const std::vector<double> fitness{4, 9, 1, 7, 3};
  Engine engine(5);
  RngChoices choices(engine);
  for (int i = 0; i < 200; ++i) {
    const auto [a, b] = tournament_select(fitness, 5, Objective::Maximize, choices);
    ASSERT_EQ(a, 1U);
    ASSERT_EQ(b, 3U);
    const auto [c, d] = tournament_select(fitness, 5, Objective::Minimize, choices);
    ASSERT_EQ(c, 2U);
    ASSERT_EQ(d, 4U);
  }
}

TEST(Tournament, DistinctEntrants) {
  const std::vector<double> fitness{1, 1};
  Engine engine(6);
  RngChoices choices(engine);
  for (int i = 0; i < 1000; ++i) {
    const auto [a, b] = tournament_select(fitness, 2, Objective::Maximize, choices);
    ASSERT_NE(a, b);
  }
}

// With all fitness values equal every ordered pair of distinct indices is
// equally likely: 3 * 2 = 6 outcomes, each 1/6.
TEST(Tournament, TiesBrokenUniformly) {
  const std::vector<double> fitness{2, 2, 2};
  Engine engine(7);
  RngChoices choices(engine);
  std::map<std::pair<std::size_t, std::size_t>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[tournament_select(fitness, 2, Objective::Maximize, choices)];
  ASSERT_EQ(counts.size(), 6U);
  for (const auto& [pair, c] : counts) EXPECT_NEAR(c / static_cast<double>(draws), 1.0 / 6.0, 0.01);
}

// Tournament of 3 out of 4 with a unique maximum at index 0: index 0 wins
// whenever it is drawn, which happens with probability 3/4.
TEST(Tournament, WinnerFrequency) {
  const std::vector<double> fitness{10, 1, 2, 3};
  Engine engine(8);
  RngChoices choices(engine);
  int wins = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i)
    if (tournament_select(fitness, 3, Objective::Maximize, choices).first == 0) ++wins;
  EXPECT_NEAR(wins / static_cast<double>(draws), 0.75, 0.01);
}

TEST(Tournament, RejectsBadSize) {
  const std::vector<double> fitness{1, 2, 3};
  Engine engine(1);
  RngChoices choices(engine);
  EXPECT_THROW(tournament_select(fitness, 1, Objective::Maximize, choices), std::invalid_argument);
  EXPECT_THROW(tournament_select(fitness, 4, Objective::Maximize, choices), std::invalid_argument);
}

TEST(GAConfig, Defaults) {
  const auto cfg = GAConfig::defaults_for(BinOA{OAParameters::make(16, 8, 2)}, CrossoverKind::parse("moo"));
  EXPECT_EQ(cfg.population_size, 50U);
  EXPECT_EQ(cfg.tournament_size, 3U);
  EXPECT_EQ(cfg.max_evaluations, 500000U);
  EXPECT_EQ(cfg.mutation_prob, 0.2);
  GAConfig bad = cfg;
  bad.tournament_size = 1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.population_size = 2;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.mutation_prob = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(SteadyStateGA, InitialPopulation) {
  for (const char* op : {"cb", "zl", "moo", "moo-s"}) {
    SteadyStateGA ga(small_config(Bent{6}, op, 1000, 3));
    ga.init_population();
    EXPECT_EQ(ga.evaluations(), 50U);
    ASSERT_EQ(ga.population().size(), 50U);
    std::vector<std::int32_t> scratch;
    for (const auto& ind : ga.population()) {
      ASSERT_EQ(hamming_weight(ind.columns.front()), 28U) << op;
      ASSERT_EQ(ind.fitness, naive_nl(ind.columns.front()));
    }
  }
  SteadyStateGA op(small_config(BalNL{6}, "op", 1000, 3));
  op.init_population();
  std::size_t total_weight = 0;
  for (const auto& ind : op.population()) {
    total_weight += hamming_weight(ind.columns.front());
    const auto w = static_cast<std::int64_t>(hamming_weight(ind.columns.front()));
    ASSERT_EQ(ind.fitness, naive_nl(ind.columns.front()) - std::abs(32 - w));
  }
  // 3200 fair coins: mean 1600, sd 28.3.
  EXPECT_NEAR(static_cast<double>(total_weight), 1600.0, 150.0);
}

TEST(SteadyStateGA, StepContracts) {
  for (const char* op : {"op", "cb", "zl-s", "moo"}) {
    SteadyStateGA ga(small_config(BalNL{6}, op, 100000, 11));
    ga.init_population();
    const ProblemModel& model = ga.model();
    for (int s = 0; s < 3000; ++s) {
      const auto before = ga.population();
      const std::size_t protected_index = ga.best_index();
      const double best_before = before[protected_index].fitness;
      const double ever_before = ga.best_ever().fitness;
      const auto evals = ga.evaluations();
      ga.step();
      ASSERT_EQ(ga.evaluations(), evals + 1);
      const auto& after = ga.population();
      ASSERT_EQ(after.size(), before.size());
      std::size_t changed = 0;
      for (std::size_t i = 0; i < after.size(); ++i) {
        if (after[i].columns != before[i].columns) {
          ++changed;
          ASSERT_NE(i, protected_index);
        }
      }
      ASSERT_LE(changed, 1U);
      ASSERT_FALSE(model.better(best_before, after[ga.best_index()].fitness));
      ASSERT_FALSE(model.better(ever_before, ga.best_ever().fitness));
      if (CrossoverKind::parse(op).balanced())
        for (const auto& ind : after) ASSERT_EQ(hamming_weight(ind.columns.front()), 32U);
    }
  }
}

TEST(SteadyStateGA, StepBeforeInitThrows) {
  SteadyStateGA ga(small_config(BalNL{4}, "cb", 100, 0));
  EXPECT_THROW(ga.step(), std::logic_error);
  EXPECT_THROW((void)ga.result(), std::logic_error);
}

TEST(SteadyStateGA, BudgetBelowPopulationOnlyInitializes) {
  for (std::uint64_t budget : {0U, 1U, 50U}) {
    SteadyStateGA ga(small_config(BalNL{6}, "moo", budget, 2));
    ga.run();
    EXPECT_EQ(ga.evaluations(), 50U);
    EXPECT_LE(ga.result().evaluations_to_best, 50U);
  }
}

TEST(SteadyStateGA, ResultDescribesBestEver) {
  for (const char* op : {"op", "cb", "moo-s"}) {
    SteadyStateGA ga(small_config(BalNL{6}, op, 5000, 21));
    ga.run();
    EXPECT_EQ(ga.evaluations(), 5000U);
    const RunResult r = ga.result();
    const BitVector f = from_hex(r.best_genotype, 64);
    const auto w = static_cast<std::int64_t>(hamming_weight(f));
    const bool penalized = std::string(op) == "op";
    EXPECT_EQ(r.best_fitness, naive_nl(f) - (penalized ? std::abs(32 - w) : 0));
    EXPECT_GE(r.evaluations_to_best, 1U);
    EXPECT_LE(r.evaluations_to_best, 5000U);
    EXPECT_EQ(r.success, r.best_fitness >= 26);
    for (const auto& ind : ga.population()) EXPECT_FALSE(ga.model().better(ind.fitness, r.best_fitness));
  }
}

TEST(SteadyStateGA, Deterministic) {
  const auto cfg = small_config(BalNL{6}, "zl", 3000, 99);
  EXPECT_EQ(run_ga(cfg), run_ga(cfg));
  auto other = cfg;
  other.seed = 100;
  EXPECT_NE(run_ga(cfg).best_genotype, run_ga(other).best_genotype);
}

// Long balanced run: every individual keeps its weight at regular checkpoints.
TEST(SteadyStateGA, ClosureDuringRun) {
  for (const char* op : {"cb-s", "zl", "moo"}) {
    SteadyStateGA ga(small_config(Bent{8}, op, 40000, 5));
    ga.init_population();
    while (!ga.finished()) {
      for (int s = 0; s < 10000 && !ga.finished(); ++s) ga.step();
      for (const auto& ind : ga.population()) ASSERT_EQ(hamming_weight(ind.columns.front()), 120U) << op;
    }
  }
}

TEST(SteadyStateGA, OAColumnsStayBalanced) {
  SteadyStateGA ga(small_config(oa_16_8_2(), "moo", 20000, 4));
  ga.run();
  for (const auto& ind : ga.population()) {
    ASSERT_EQ(ind.columns.size(), 8U);
    for (const auto& c : ind.columns) ASSERT_EQ(hamming_weight(c), 8U);
    const CandidateOA a(ind.columns);
    ASSERT_DOUBLE_EQ(ind.fitness, fit_oa(a, OAParameters::make(16, 8, 2), false));
  }
  const RunResult r = ga.result();
  EXPECT_EQ(r.success, r.best_fitness == 0);
  // Genotype is eight 4-digit hex columns.
  EXPECT_EQ(r.best_genotype.size(), 8U * 4 + 7);
}

TEST(SteadyStateGA, OAOnePointUsesPenalty) {
  SteadyStateGA ga(small_config(oa_16_8_2(), "op", 2000, 4));
  ga.run();
  for (const auto& ind : ga.population()) {
    const CandidateOA a(ind.columns);
    ASSERT_DOUBLE_EQ(ind.fitness, fit_oa(a, OAParameters::make(16, 8, 2), true));
  }
}

}  // namespace
}  // namespace balcross
