#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <string>

#include "balcross/operators.hpp"
#include "oracles.hpp"

namespace balcross {
namespace {

using testing::ExplorerChoices;
using Tag = CrossoverKind::Tag;

BalancedBitstring bb(const char* s) { return BalancedBitstring::parse(s); }

std::set<std::string> weight_k_strings(std::size_t n, std::size_t k) {
  std::set<std::string> out;
  for (std::uint32_t v = 0; v < (1U << n); ++v) {
    if (static_cast<std::size_t>(__builtin_popcount(v)) != k) continue;
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i)
      if ((v >> i) & 1U) s[i] = '1';
    out.insert(s);
  }
  return out;
}

TEST(CrossoverKind, Codes) {
  for (const auto& kind : CrossoverKind::all()) EXPECT_EQ(CrossoverKind::parse(kind.code()), kind);
  EXPECT_EQ(CrossoverKind::parse("cb-s").code(), "cb-s");
  EXPECT_TRUE(CrossoverKind::parse("zl-s").shuffled());
  EXPECT_FALSE(CrossoverKind::parse("op").balanced());
  EXPECT_THROW(CrossoverKind::parse("op-s"), std::invalid_argument);
  EXPECT_THROW(CrossoverKind::parse("ux"), std::invalid_argument);
  EXPECT_EQ(CrossoverKind::all().size(), 7U);
}

TEST(OnePoint, CutDefinition) {
  const auto [first, second] = one_point_children(parse_bit_string("0000"), parse_bit_string("1111"), 2);
  EXPECT_EQ(to_bit_string(first), "0011");
  EXPECT_EQ(to_bit_string(second), "1100");
  EXPECT_THROW(one_point_children(parse_bit_string("00"), parse_bit_string("11"), 2), std::invalid_argument);
}

TEST(OnePoint, ReachableChildren) {
  const auto p1 = parse_bit_string("1100");
  const auto p2 = parse_bit_string("0011");
  std::set<std::string> seen;
  testing::explore([&](ExplorerChoices& c) { seen.insert(to_bit_string(one_point_crossover(p1, p2, c))); });
  // Cuts 1..3 give the pairs (1011, 0100), (1111, 0000), (1101, 0010).
  EXPECT_EQ(seen, (std::set<std::string>{"1011", "0100", "1111", "0000", "1101", "0010"}));

  const auto x = parse_bit_string("0110");
  testing::explore([&](ExplorerChoices& c) { EXPECT_EQ(one_point_crossover(x, x, c), x); });
}

TEST(OnePoint, DoesNotPreserveWeightInGeneral) {
  const auto p1 = parse_bit_string("1100");
  const auto p2 = parse_bit_string("0011");
  bool broke = false;
  testing::explore([&](ExplorerChoices& c) { broke |= hamming_weight(one_point_crossover(p1, p2, c)) != 2; });
  EXPECT_TRUE(broke);
}

TEST(OnePoint, RejectsBadInput) {
  Engine eng(1);
  RngChoices c(eng);
  EXPECT_THROW(one_point_crossover(parse_bit_string("01"), parse_bit_string("011"), c), std::invalid_argument);
  EXPECT_THROW(one_point_crossover(parse_bit_string("1"), parse_bit_string("0"), c), std::invalid_argument);
}

TEST(CounterCross, IdenticalParentsAreFixed) {
  const auto x = bb("0110100101");
  testing::explore([&](ExplorerChoices& c) { EXPECT_EQ(counter_cross(x, x, c), x); });
}

TEST(CounterCross, ReachesEveryWeightTwoString) {
  std::set<std::string> seen;
  testing::explore([&](ExplorerChoices& c) { seen.insert(counter_cross(bb("1100"), bb("0011"), c).str()); });
  EXPECT_EQ(seen, weight_k_strings(4, 2));
}

// Outcome distribution of the implementation (over its decision tree) equals
// the distribution of the pseudocode transcription over all 2^n coin masks,
// for every parent pair with n <= 6.
TEST(CounterCross, MatchesPseudocodeExhaustively) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const auto strings = weight_k_strings(n, k);
      for (const auto& a : strings) {
        for (const auto& b : strings) {
          const auto p1 = BalancedBitstring::parse(a);
          const auto p2 = BalancedBitstring::parse(b);
          std::map<std::string, double> reference;
          for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            const auto [child, draws] = testing::counter_cross_reference(p1.bits(), p2.bits(), k, mask);
            reference[to_bit_string(child)] += 1.0 / static_cast<double>(1ULL << n);
          }
          const auto impl = testing::outcome_distribution<std::string>(
              [&](ExplorerChoices& c) { return counter_cross(p1, p2, c).str(); });
          ASSERT_EQ(impl.size(), reference.size()) << a << " x " << b;
          for (const auto& [child, p] : reference) {
            ASSERT_TRUE(impl.count(child)) << child;
            ASSERT_NEAR(impl.at(child), p, 1e-12);
          }
        }
      }
    }
  }
}

TEST(CounterCross, RejectsMismatchedParents) {
  Engine eng(1);
  RngChoices c(eng);
  EXPECT_THROW(counter_cross(bb("1100"), bb("1000"), c), std::invalid_argument);
  EXPECT_THROW(counter_cross(bb("1100"), bb("11000"), c), std::invalid_argument);
}

TEST(ZeroLengthsCross, IdenticalParentsAreFixed) {
  const auto r = encode_zero_lengths(bb("0010011000101"));
  testing::explore([&](ExplorerChoices& c) { EXPECT_EQ(zero_lengths_cross(r, r, c), r); });
}

TEST(ZeroLengthsCross, AccumulatorSaturates) {
  const ZeroLengthsCoding p1({0, 0, 0, 0, 4}, 8, 4);
  const ZeroLengthsCoding p2({4, 0, 0, 0, 0}, 8, 4);
  const auto dist = testing::outcome_distribution<std::vector<std::size_t>>(
      [&](ExplorerChoices& c) { return zero_lengths_cross(p1, p2, c).runs(); });
  ASSERT_EQ(dist.size(), 2U);
  EXPECT_DOUBLE_EQ(dist.at({0, 0, 0, 0, 4}), 0.5);
  EXPECT_DOUBLE_EQ(dist.at({4, 0, 0, 0, 0}), 0.5);
}

TEST(ZeroLengthsCross, ClipsARunThatWouldOverflow) {
  // Taking 3 then 2 exceeds n-k = 4, so the second entry is clipped to 1.
  const ZeroLengthsCoding p1({3, 1, 0}, 6, 2);
  const ZeroLengthsCoding p2({0, 2, 2}, 6, 2);
  std::set<std::vector<std::size_t>> seen;
  testing::explore([&](ExplorerChoices& c) { seen.insert(zero_lengths_cross(p1, p2, c).runs()); });
  EXPECT_EQ(seen, (std::set<std::vector<std::size_t>>{{3, 1, 0}, {0, 1, 3}, {0, 2, 2}}));
  // (3, min(2, 4-3)=1, 0) coincides with p1.
}

TEST(ZeroLengthsCross, RejectsMismatchedShapes) {
  Engine eng(1);
  RngChoices c(eng);
  EXPECT_THROW(zero_lengths_cross(ZeroLengthsCoding({1, 1}, 3, 1), ZeroLengthsCoding({1, 2}, 4, 1), c),
               std::invalid_argument);
}

TEST(MapOfOnesCross, IdenticalParentsGivePermutation) {
  const MapOfOnes q({2, 5, 6, 8}, 8);
  testing::explore([&](ExplorerChoices& c) {
    const auto child = map_of_ones_cross(q, q, c);
    EXPECT_EQ(decode_map_of_ones(child), decode_map_of_ones(q));
  });
  const MapOfOnes shuffled({8, 2, 6, 5}, 8);
  testing::explore([&](ExplorerChoices& c) {
    EXPECT_EQ(decode_map_of_ones(map_of_ones_cross(q, shuffled, c)).str(), "01001101");
  });
}

TEST(MapOfOnesCross, DisjointParentsReachAllPairs) {
  std::set<std::string> seen;
  testing::explore([&](ExplorerChoices& c) {
    const auto child = map_of_ones_cross(MapOfOnes({1, 2}, 4), MapOfOnes({3, 4}, 4), c);
    ASSERT_EQ(child.k(), 2U);
    ASSERT_NE(child[0], child[1]);
    seen.insert(decode_map_of_ones(child).str());
  });
  EXPECT_EQ(seen, weight_k_strings(4, 2));
}

TEST(MapOfOnesCross, SharedPositionsAreNotDuplicated) {
  testing::explore([&](ExplorerChoices& c) {
    const auto child = map_of_ones_cross(MapOfOnes({1, 2, 3}, 6), MapOfOnes({3, 1, 6}, 6), c);
    EXPECT_NO_THROW(decode_map_of_ones(child));  // constructor already rejects duplicates
    EXPECT_EQ(child.k(), 3U);
  });
}

TEST(MapOfOnesCross, RejectsMismatch) {
  Engine eng(1);
  RngChoices c(eng);
  EXPECT_THROW(map_of_ones_cross(MapOfOnes({1}, 4), MapOfOnes({1, 2}, 4), c), std::invalid_argument);
  EXPECT_THROW(map_of_ones_cross(MapOfOnes({1}, 4), MapOfOnes({1}, 5), c), std::invalid_argument);
}

TEST(Shuffle, IdentityPermutationMatchesLeftToRight) {
  std::mt19937_64 gen(21);
  for (Tag tag : {Tag::CounterBased, Tag::ZeroLengths, Tag::MapOfOnes}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto p1 = BalancedBitstring(testing::random_weight_k(32, 12, gen), 12);
      const auto p2 = BalancedBitstring(testing::random_weight_k(32, 12, gen), 12);
      Engine e1(trial), e2(trial);
      RngChoices c1(e1), c2(e2);
      EXPECT_EQ(with_permutation(tag, PositionPermutation::identity(32), p1, p2, c1),
                balanced_cross(tag, p1, p2, c2));
    }
  }
}

TEST(Shuffle, IdenticalParentsAreFixed) {
  Engine eng(4);
  RngChoices c(eng);
  const auto x = bb("1011000110");
  for (Tag tag : {Tag::CounterBased, Tag::ZeroLengths, Tag::MapOfOnes})
    for (int i = 0; i < 200; ++i) EXPECT_EQ(with_shuffle(tag, x, x, c), x);
}

TEST(Shuffle, PermutationIsApplied) {
  // Reversal: parents are crossed as 0011 x 1100 and the child is mirrored back.
  const auto perm = PositionPermutation({3, 2, 1, 0});
  const auto p1 = bb("1100");
  const auto p2 = bb("0011");
  std::set<std::string> seen;
  testing::explore([&](ExplorerChoices& c) {
    seen.insert(with_permutation(Tag::CounterBased, perm, p1, p2, c).str());
  });
  EXPECT_EQ(seen, weight_k_strings(4, 2));
  // First coin takes the permuted p1 (slot 0 holds 0); slot 0 maps back to
  // the last position.
  std::vector<std::pair<std::size_t, std::size_t>> path{{0, 2}};
  ExplorerChoices first_p1(path);
  EXPECT_EQ(with_permutation(Tag::CounterBased, perm, p1, p2, first_p1).str()[3], '0');
  EXPECT_EQ(perm.apply(p1.bits()), parse_bit_string("0011"));
  EXPECT_EQ(perm.invert(perm.apply(p1.bits())), p1.bits());
}

TEST(Shuffle, RandomPermutationIsUniform) {
  std::map<std::vector<std::size_t>, double> dist;
  testing::explore([&](ExplorerChoices& c) {
    const auto perm = PositionPermutation::random(4, c);
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < 4; ++i) v.push_back(perm.source(i));
    dist[v] += c.probability();
  });
  ASSERT_EQ(dist.size(), 24U);
  for (const auto& [v, p] : dist) EXPECT_NEAR(p, 1.0 / 24.0, 1e-12);
}

TEST(Shuffle, RejectsOnePoint) {
  Engine eng(1);
  RngChoices c(eng);
  EXPECT_THROW(with_shuffle(Tag::OnePoint, bb("10"), bb("01"), c), std::invalid_argument);
  EXPECT_THROW(PositionPermutation({0, 0, 1}), std::invalid_argument);
}

// 10^5 random parent pairs per operator and variant.
TEST(Closure, BalancedOperatorsPreserveWeight) {
  const std::pair<std::size_t, std::size_t> grid[] = {{8, 4}, {64, 32}, {64, 28}, {16, 8}};
  std::mt19937_64 gen(99);
  Engine eng(99);
  RngChoices c(eng);
  for (const auto& kind : CrossoverKind::all()) {
    if (!kind.balanced()) continue;
    for (int trial = 0; trial < 100000; ++trial) {
      const auto [n, k] = grid[trial % 4];
      const auto p1 = testing::random_weight_k(n, k, gen);
      const auto p2 = testing::random_weight_k(n, k, gen);
      const auto child = crossover(kind, p1, p2, c);
      ASSERT_EQ(child.size(), n);
      ASSERT_EQ(hamming_weight(child), k) << kind.code();
    }
  }
}

TEST(Closure, EncodedOperatorsKeepInvariants) {
  std::mt19937_64 gen(5);
  Engine eng(5);
  RngChoices c(eng);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = 2 + gen() % 80;
    const std::size_t k = gen() % (n + 1);
    const auto a = BalancedBitstring(testing::random_weight_k(n, k, gen), k);
    const auto b = BalancedBitstring(testing::random_weight_k(n, k, gen), k);
    const auto r = zero_lengths_cross(encode_zero_lengths(a), encode_zero_lengths(b), c);
    std::size_t sum = 0;
    for (auto v : r.runs()) sum += v;
    ASSERT_EQ(sum, n - k);
    const auto q = map_of_ones_cross(encode_map_of_ones(a), encode_map_of_ones(b), c);
    ASSERT_EQ(std::set<std::size_t>(q.positions().begin(), q.positions().end()).size(), k);
  }
}

TEST(SwapMutation, Cases) {
  Engine eng(2);
  RngChoices c(eng);
  EXPECT_EQ(swap_mutation(bb("1100"), 0.0, c), bb("1100"));
  EXPECT_EQ(swap_mutation(bb("10"), 1.0, c), bb("01"));
  EXPECT_EQ(swap_mutation(bb("0000"), 1.0, c), bb("0000"));
  EXPECT_EQ(swap_mutation(bb("111"), 1.0, c), bb("111"));

  const auto dist = testing::outcome_distribution<std::string>(
      [](ExplorerChoices& ch) { return swap_mutation(bb("1100"), 1.0, ch).str(); });
  ASSERT_EQ(dist.size(), 4U);
  for (const char* s : {"0110", "0101", "1010", "1001"}) EXPECT_DOUBLE_EQ(dist.at(s), 0.25);
}

TEST(SwapMutation, ProbabilityIsRespected) {
  Engine eng(8);
  RngChoices c(eng);
  int changed = 0;
  const auto x = bb("1100110011");
  for (int i = 0; i < 20000; ++i) changed += swap_mutation(x, 0.7, c) != x;
  EXPECT_NEAR(changed / 20000.0, 0.7, 0.02);
}

TEST(BitFlipMutation, Cases) {
  Engine eng(2);
  RngChoices c(eng);
  EXPECT_EQ(bit_flip_mutation(parse_bit_string("0101"), 0.0, c), parse_bit_string("0101"));
  EXPECT_EQ(bit_flip_mutation(parse_bit_string("0"), 1.0, c), parse_bit_string("1"));
  const auto dist = testing::outcome_distribution<std::string>(
      [](ExplorerChoices& ch) { return to_bit_string(bit_flip_mutation(parse_bit_string("00"), 1.0, ch)); });
  ASSERT_EQ(dist.size(), 2U);
  EXPECT_DOUBLE_EQ(dist.at("10"), 0.5);
  EXPECT_DOUBLE_EQ(dist.at("01"), 0.5);
}

}  // namespace
}  // namespace balcross
