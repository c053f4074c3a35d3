#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/esim.hpp"
#include "srlfuse/nli_data.hpp"
#include "srlfuse/task_features.hpp"

namespace srlfuse {
namespace {

using Words = std::vector<std::string>;

const Words kTagLabels{"O", "B-ARG0", "I-ARG0", "B-V"};

EsimConfig small_config(bool tags) {
  EsimConfig c;
  c.hidden = 4;
  c.projection = 4;
  c.classifier = 4;
  c.embedding.word_dim = 8;
  c.embedding.contextual.dim = 8;
  c.embedding.tag_dim = 3;
  c.embedding.use_tags = tags;
  return c;
}

EntailmentExample pair(Words p, Words h, NliLabel label = NliLabel::kEntailment) {
  EntailmentExample ex;
  ex.premise = std::move(p);
  ex.hypothesis = std::move(h);
  ex.label = label;
  ex.premise_tags.assign(ex.premise.size(), "O");
  ex.hypothesis_tags.assign(ex.hypothesis.size(), "O");
  if (!ex.premise.empty()) ex.premise_tags[0] = "B-ARG0";
  return ex;
}

Vocabulary vocab_for(const std::vector<EntailmentExample>& data) { return build_word_vocabulary(data); }

TEST(NliLabels, NamesAndParsing) {
  EXPECT_EQ(nli_label_names(), (std::array<std::string, 3>{"entailment", "contradiction", "neutral"}));
  EXPECT_EQ(parse_nli_label("neutral"), NliLabel::kNeutral);
  EXPECT_FALSE(parse_nli_label("-"));
  EXPECT_STREQ(to_string(NliLabel::kContradiction), "contradiction");
}

TEST(Esim, OutputIsADistribution) {
  const std::vector<EntailmentExample> data{pair({"a", "man", "swims"}, {"the", "man", "is", "wet"})};
  EsimModel m(small_config(true), vocab_for(data), std::nullopt, kTagLabels, 3);
  const auto p = m.probabilities(data[0]);
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_TRUE((p.array() > 0.0).all());
}

TEST(Esim, AttentionRowsNormalised) {
  const std::vector<EntailmentExample> data{pair({"a", "b", "c"}, {"d", "e"})};
  EsimModel m(small_config(false), vocab_for(data), std::nullopt, {}, 3);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  const Matrix p = Matrix::NullaryExpr(5, m.input_width(), [&] { return n(rng); });
  const Matrix h = Matrix::NullaryExpr(3, m.input_width(), [&] { return n(rng); });
  EsimTrace trace;
  m.probabilities_fused(p, h, &trace);
  ASSERT_EQ(trace.premise_attention.rows(), 5);
  ASSERT_EQ(trace.premise_attention.cols(), 3);
  ASSERT_EQ(trace.hypothesis_attention.rows(), 3);
  ASSERT_EQ(trace.hypothesis_attention.cols(), 5);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(trace.premise_attention.row(i).sum(), 1.0, 1e-12);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(trace.hypothesis_attention.row(i).sum(), 1.0, 1e-12);
}

TEST(Esim, NotSymmetricInItsInputs) {
  const std::vector<EntailmentExample> data{pair({"a", "dog", "runs", "fast"}, {"an", "animal", "moves"})};
  EsimModel m(small_config(false), vocab_for(data), std::nullopt, {}, 5);
  const auto swapped = pair(data[0].hypothesis, data[0].premise);
  EXPECT_GT((m.probabilities(data[0]) - m.probabilities(swapped)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Esim, WrongWidthRejected) {
  const std::vector<EntailmentExample> data{pair({"a"}, {"b"})};
  EsimModel m(small_config(false), vocab_for(data), std::nullopt, {}, 5);
  try {
    m.probabilities_fused(Matrix::Zero(2, m.input_width() + 1), Matrix::Zero(2, m.input_width() + 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimension);
  }
}

TEST(Esim, TagChannelWidthAndIsolation) {
  const std::vector<EntailmentExample> data{pair({"a", "man", "sleeps"}, {"a", "person", "rests"})};
  EsimModel with(small_config(true), vocab_for(data), std::nullopt, kTagLabels, 9);
  EsimModel without(small_config(false), vocab_for(data), std::nullopt, kTagLabels, 9);
  EXPECT_EQ(with.input_width() - without.input_width(), 3);
  ASSERT_NE(without.token_encoder().tag_table(), nullptr);
  const auto before = without.token_encoder().tag_table()->access_count();
  auto garbage = data[0];
  garbage.premise_tags = {"not-a-tag"};
  EXPECT_NO_THROW(without.probabilities(garbage));
  EXPECT_EQ(without.token_encoder().tag_table()->access_count(), before);
  EXPECT_THROW(with.probabilities(garbage), Error);
}

TEST(Esim, GradientCheck) {
  const std::vector<EntailmentExample> data{pair({"a", "man", "sleeps"}, {"a", "person", "rests", "now"})};
  EsimModel m(small_config(true), vocab_for(data), std::nullopt, kTagLabels, 11);
  const auto r = oracle::gradient_check(m.params(), [&](nn::Graph& g) { return m.loss(g, data[0]); }, 40, 3);
  EXPECT_EQ(r.coordinates, 40);
  EXPECT_LT(r.max_relative_error, 1e-3) << r.worst;
}

TEST(Esim, EmptyTrainingSetRejected) {
  const std::vector<EntailmentExample> data{pair({"a"}, {"b"})};
  EsimModel m(small_config(false), vocab_for(data), std::nullopt, {}, 1);
  EXPECT_THROW(train_entailment(m, std::span<const EntailmentExample>{}, {}), Error);
  auto bad = data;
  bad[0].hypothesis.clear();
  bad[0].hypothesis_tags.clear();
  EXPECT_THROW(train_entailment(m, bad, {}), Error);
}

TEST(Esim, PredictIsArgmax) {
  const std::vector<EntailmentExample> data{pair({"x", "y"}, {"y", "z"})};
  EsimModel m(small_config(false), vocab_for(data), std::nullopt, {}, 2);
  const auto p = m.probabilities(data[0]);
  Eigen::Index best = 0;
  p.maxCoeff(&best);
  EXPECT_EQ(static_cast<int>(m.predict(data[0])), static_cast<int>(best));
}

TEST(Esim, LearnsToyCorpusIncludingParasailTriple) {
  const auto train = load_nli_jsonl(std::string(SRLFUSE_TEST_DATA_DIR) + "/toy/nli_train.jsonl").examples;
  EsimConfig c;
  c.embedding.use_tags = false;
  EsimModel m(c, build_word_vocabulary(train), std::nullopt, {}, 1);
  TrainSchedule s;
  s.epochs = 15;
  s.learning_rate = 0.005;
  s.batch_size = 8;
  train_entailment(m, train, s, [&](int, double) { return entailment_accuracy(m, train) < 1.0; });
  EXPECT_DOUBLE_EQ(entailment_accuracy(m, train), 1.0);
  int found = 0;
  for (const auto& ex : train) {
    if (ex.premise != Words{"A", "man", "parasails", "in", "the", "choppy", "water", "."}) continue;
    ++found;
    EXPECT_EQ(m.predict(ex), ex.label);
  }
  EXPECT_EQ(found, 3);
}

}  // namespace
}  // namespace srlfuse
