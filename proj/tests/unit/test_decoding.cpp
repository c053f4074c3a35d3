#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srlfuse/decoding.hpp"
#include "srlfuse/error.hpp"

namespace srlfuse {
namespace {

struct Instance {
  EmissionMatrix emissions;
  BoolMatrix mask;
  BoolVector start;
};

Instance random_instance(std::mt19937_64& rng, bool integer_scores = false) {
  std::uniform_int_distribution<int> roles(1, 3), len(1, 8), small(-2, 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto a = oracle::alphabet_with_roles(roles(rng));
  const int n = len(rng), k = static_cast<int>(a.size());
  Instance inst{EmissionMatrix(n, k), transition_mask(a), start_mask(a)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) inst.emissions(i, j) = integer_scores ? small(rng) : gauss(rng);
  return inst;
}

TEST(Viterbi, StartMaskExcludesInside) {
  const auto a = oracle::alphabet_with_roles(1);  // O, B-R0, I-R0
  EmissionMatrix e(1, 3);
  e << 0.1, 0.9, 2.0;
  const auto p = viterbi_decode(e, transition_mask(a), start_mask(a));
  EXPECT_EQ(p.tags, (std::vector<int>{1}));
  EXPECT_DOUBLE_EQ(p.score, 0.9);
}

TEST(Viterbi, UnconstrainedEqualsGreedy) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng);
    const BoolMatrix all = BoolMatrix::Constant(inst.mask.rows(), inst.mask.cols(), true);
    const BoolVector any = BoolVector::Constant(inst.start.size(), true);
    EXPECT_EQ(viterbi_decode(inst.emissions, all, any).tags, greedy_decode(inst.emissions).tags);
  }
}

TEST(Viterbi, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = random_instance(rng, trial % 3 == 0);
    const auto p = viterbi_decode(inst.emissions, inst.mask, inst.start);
    const auto b = oracle::brute_force_decode(inst.emissions, inst.mask, inst.start);
    ASSERT_TRUE(b.found);
    EXPECT_EQ(p.tags, b.tags) << "trial " << trial;
    EXPECT_NEAR(p.score, b.score, 1e-9);
  }
}

TEST(Viterbi, OutputIsValidAndDominatesRandomValidPaths) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> len(1, 10);
    const auto a = TagAlphabet({"ARG0", "ARG1", "V"});
    const int n = len(rng);
    EmissionMatrix e = EmissionMatrix::Random(n, static_cast<Eigen::Index>(a.size()));
    const auto p = viterbi_decode(e, transition_mask(a), start_mask(a));
    EXPECT_TRUE(decode_spans(a.to_tags(p.tags)).valid());
    for (int s = 0; s < 50; ++s) {
      const auto t = oracle::random_valid_bio(rng, static_cast<std::size_t>(n), a.roles());
      EXPECT_GE(p.score + 1e-12, path_score(e, a.ids(t)));
    }
  }
}

TEST(Viterbi, RowShiftMovesScoreOnly) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng);
    const auto base = viterbi_decode(inst.emissions, inst.mask, inst.start);
    const double c = shift(rng);
    const Eigen::Index row = trial % inst.emissions.rows();
    inst.emissions.row(row).array() += c;
    const auto moved = viterbi_decode(inst.emissions, inst.mask, inst.start);
    EXPECT_EQ(moved.tags, base.tags);
    EXPECT_NEAR(moved.score, base.score + c, 1e-9);
  }
}

TEST(Viterbi, EdgeCasesAndErrors) {
  const auto a = oracle::alphabet_with_roles(1);
  EXPECT_TRUE(viterbi_decode(EmissionMatrix(0, 3), transition_mask(a), start_mask(a)).tags.empty());
  EXPECT_THROW(viterbi_decode(EmissionMatrix::Zero(2, 4), transition_mask(a), start_mask(a)), Error);
  EmissionMatrix bad = EmissionMatrix::Zero(2, 3);
  bad(1, 1) = std::nan("");
  EXPECT_THROW(viterbi_decode(bad, transition_mask(a), start_mask(a)), Error);
  const BoolVector none = BoolVector::Constant(3, false);
  EXPECT_THROW(viterbi_decode(EmissionMatrix::Zero(1, 3), transition_mask(a), none), Error);
}

TEST(Greedy, Examples) {
  EmissionMatrix e(1, 2);
  e << 0.2, 0.8;
  EXPECT_EQ(greedy_decode(e).tags, (std::vector<int>{1}));
  const auto a = oracle::alphabet_with_roles(1);
  EmissionMatrix inside_first(2, 3);
  inside_first << 0.0, 0.1, 1.0, 1.0, 0.0, 0.0;
  const auto g = greedy_decode(inside_first);
  EXPECT_EQ(g.tags, (std::vector<int>{2, 0}));
  EXPECT_FALSE(decode_spans(a.to_tags(g.tags)).valid());
}

}  // namespace
}  // namespace srlfuse
