#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/metrics.hpp"
#include "srlfuse/srl.hpp"
#include "srlfuse/srl_corpus.hpp"

namespace srlfuse {
namespace {

using Words = std::vector<std::string>;
namespace fs = std::filesystem;

SrlConfig small_config(int layers = 2, int hidden = 8) {
  SrlConfig c;
  c.layers = layers;
  c.hidden = hidden;
  c.predicate_dim = 4;
  c.dropout = 0.0;
  c.contextual.dim = 8;
  return c;
}

const TagAlphabet& roles() {
  static const TagAlphabet a({"ARG0", "ARG1", "V"});
  return a;
}

std::vector<SrlExample> corpus(const std::string& name) {
  return load_srl_corpus(std::string(SRLFUSE_TEST_DATA_DIR) + "/toy/" + name);
}

TagAlphabet alphabet_of(const std::vector<SrlExample>& data) {
  std::vector<std::vector<BioTag>> seqs;
  for (const auto& ex : data) seqs.push_back(ex.tags);
  return TagAlphabet::from_sequences(seqs);
}

TEST(SrlModel, LayersAlternateDirection) {
  SrlModel m(small_config(5), roles(), 1);
  const auto dirs = m.layer_directions();
  ASSERT_EQ(dirs.size(), 5u);
  for (std::size_t k = 0; k < dirs.size(); ++k)
    EXPECT_EQ(dirs[k], k % 2 == 0 ? nn::Direction::kForward : nn::Direction::kBackward) << k;
  EXPECT_EQ(m.layers().size(), 5u);
}

TEST(SrlModel, ConfigErrors) {
  for (auto bad : {small_config(0), small_config(2, 0)}) {
    try {
      SrlModel m(bad, roles(), 1);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    }
  }
  EXPECT_THROW(SrlModel(small_config(), TagAlphabet(), 1), Error);
}

TEST(SrlModel, OutputIsLogDistributionPerToken) {
  SrlModel m(small_config(), roles(), 3);
  const Words w{"John", "ate", "an", "apple", "."};
  nn::Graph g;
  const Matrix out = m.forward(g, w, PredicateMarking::single(w.size(), 1)).value();
  ASSERT_EQ(out.rows(), 5);
  ASSERT_EQ(out.cols(), static_cast<Eigen::Index>(roles().size()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) EXPECT_NEAR(out.row(i).array().exp().sum(), 1.0, 1e-12);
  nn::Graph g2;
  const Words none;
  EXPECT_THROW(m.forward(g2, none, PredicateMarking{}), Error);
}

TEST(SrlModel, InputWidthIsContextualPlusIndicator) {
  SrlModel m(small_config(), roles(), 3);
  const Words w{"a", "b", "c"};
  nn::Graph g;
  EXPECT_EQ(m.input(g, w, PredicateMarking::single(3, 0)).value().cols(), 8 + 4);
}

TEST(SrlModel, CarryGateOpenAtInitAndDeepStackStaysFinite) {
  SrlConfig c = small_config(8, 16);
  SrlModel m(c, roles(), 5);
  const Words w{"The", "cat", "sat", "on", "the", "mat", "."};
  nn::Graph g;
  const Matrix x = m.input(g, w, PredicateMarking::single(w.size(), 2)).value();
  EXPECT_GT(m.layers().front().mean_carry_gate(x), 0.5);
  nn::Graph g2;
  const Matrix out = m.forward(g2, w, PredicateMarking::single(w.size(), 2)).value();
  EXPECT_TRUE(out.allFinite());
  EXPECT_GT(out.array().exp().rowwise().sum().minCoeff(), 0.999);
}

TEST(SrlModel, PredicateIndicatorChangesOutput) {
  SrlModel m(small_config(), roles(), 7);
  const Words w{"John", "said", "Mary", "bought", "a", "car"};
  PredicateMarking both{{false, true, false, true, false, false}};
  const auto a = m.tag_one_predicate(w, both, 1);
  const auto b = m.tag_one_predicate(w, both, 3);
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(a, m.tag_one_predicate(w, both, 1));
}

TEST(SrlModel, UnflaggedPredicateRejected) {
  SrlModel m(small_config(), roles(), 7);
  const Words w{"John", "ate", "fish"};
  const auto marking = PredicateMarking::single(3, 1);
  for (std::size_t bad : {0u, 2u, 3u}) {
    try {
      m.tag_one_predicate(w, marking, bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    }
  }
}

TEST(SrlModel, PredictionsAreValidBio) {
  SrlModel m(small_config(), roles(), 11);
  const Words w{"Charlie", "sold", "a", "book", "to", "Sherry", "last", "week", "."};
  for (std::size_t p = 0; p < w.size(); ++p) {
    const auto tags = m.predict(w, p);
    EXPECT_EQ(tags.size(), w.size());
    EXPECT_TRUE(is_valid_bio(tags));
  }
}

TEST(SrlModel, GradientCheck) {
  SrlModel m(small_config(2, 8), roles(), 13);
  const SrlExample ex{{"John", "ate", "an", "apple"},
                      1,
                      {BioTag::begin("ARG0"), BioTag::begin("V"), BioTag::begin("ARG1"), BioTag::inside("ARG1")}};
  const auto r = oracle::gradient_check(m.params(), [&](nn::Graph& g) { return m.loss(g, ex); }, 40, 21);
  EXPECT_EQ(r.coordinates, 40);
  EXPECT_LT(r.max_relative_error, 1e-3) << r.worst;
}

TEST(SrlTraining, ZeroEpochsLeavesParameters) {
  const auto data = corpus("srl_basic.conll");
  SrlModel m(small_config(), alphabet_of(data), 1);
  SrlModel ref(small_config(), alphabet_of(data), 1);
  TrainSchedule s;
  s.epochs = 0;
  const auto stats = train_srl(m, data, s);
  EXPECT_TRUE(stats.epoch_loss.empty());
  EXPECT_TRUE(m.params().values_equal(ref.params()));
}

TEST(SrlTraining, RejectsUnknownRoleAndMisalignedExample) {
  SrlModel m(small_config(), roles(), 1);
  std::vector<SrlExample> bad{{{"a", "b"}, 0, {BioTag::begin("V"), BioTag::begin("ARG9")}}};
  EXPECT_THROW(train_srl(m, bad, {}), Error);
  bad = {{{"a", "b"}, 0, {BioTag::begin("V")}}};
  EXPECT_THROW(train_srl(m, bad, {}), Error);
  bad = {{{"a", "b"}, 5, {BioTag::begin("V"), BioTag::outside()}}};
  EXPECT_THROW(train_srl(m, bad, {}), Error);
}

TEST(SrlTraining, LossFallsAndCorpusIsLearned) {
  const auto data = corpus("srl_basic.conll");
  SrlModel m(SrlConfig::desk(), alphabet_of(data), 1);
  TrainSchedule s;
  s.epochs = 12;
  s.learning_rate = 0.01;
  s.batch_size = 4;
  const auto stats = train_srl(m, data, s);
  ASSERT_EQ(stats.epoch_loss.size(), 12u);
  EXPECT_LT(stats.epoch_loss.back(), 0.5 * stats.epoch_loss.front());
  std::vector<std::vector<BioTag>> gold;
  for (const auto& ex : data) gold.push_back(ex.tags);
  EXPECT_DOUBLE_EQ(srl_span_f1(predict_srl(m, data), gold).f1, 1.0);
}

TEST(SrlTraining, EarlyStopFromCallback) {
  const auto data = corpus("srl_basic.conll");
  SrlModel m(small_config(), alphabet_of(data), 1);
  TrainSchedule s;
  s.epochs = 10;
  int calls = 0;
  const auto stats = train_srl(m, data, s, [&](int, double) { return ++calls < 2; });
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(stats.epoch_loss.size(), 2u);
}

TEST(SrlTraining, CharlieBracketing) {
  const auto data = corpus("srl_full.conll");
  SrlModel m(SrlConfig::desk(), alphabet_of(data), 1);
  TrainSchedule s;
  s.epochs = 40;
  s.learning_rate = 0.01;
  s.batch_size = 4;
  train_srl(m, data, s, [&](int, double) {
    std::vector<std::vector<BioTag>> gold;
    for (const auto& ex : data) gold.push_back(ex.tags);
    return srl_span_f1(predict_srl(m, data), gold).f1 < 1.0;
  });
  const Words w{"Charlie", "sold", "a", "book", "to", "Sherry", "last", "week", "."};
  const auto tags = tag_strings(m.predict(w, 1));
  EXPECT_EQ(tags, (Words{"B-ARG0", "B-V", "B-ARG1", "I-ARG1", "B-ARG2", "I-ARG2", "B-AM-TMP", "I-AM-TMP", "O"}));
}

TEST(SrlCheckpoint, RoundTrip) {
  const auto path = fs::temp_directory_path() / "srlfuse_test_srl_ckpt.json";
  SrlModel m(small_config(), roles(), 17);
  m.save(path.string());
  const auto back = SrlModel::load(path.string());
  EXPECT_EQ(back.config_hash(), m.config_hash());
  EXPECT_TRUE(back.params().values_equal(m.params()));
  EXPECT_EQ(back.alphabet(), m.alphabet());
  const Words w{"John", "ate", "an", "apple"};
  EXPECT_EQ(back.tag_one_predicate(w, PredicateMarking::single(4, 1), 1),
            m.tag_one_predicate(w, PredicateMarking::single(4, 1), 1));
  EXPECT_NE(SrlModel(small_config(3), roles(), 17).config_hash(), m.config_hash());
  fs::remove(path);
  try {
    SrlModel::load(path.string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

// Independent count of non-O labels with first-wins tie breaking.
std::optional<std::size_t> most_labeled_oracle(const std::vector<PredicateRun>& runs) {
  std::optional<std::size_t> best;
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::size_t c = 0;
    for (const auto& t : runs[i].labels)
      if (t.str() != "O") ++c;
    if (!best || c > best_count) {
      best = i;
      best_count = c;
    }
  }
  return best;
}

TEST(Collapse, SelectMatchesCountingOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<PredicateRun> runs(rng() % 5);
    const int len = 1 + static_cast<int>(rng() % 6);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      runs[r].predicate = r;
      runs[r].labels = oracle::random_valid_bio(rng, static_cast<std::size_t>(len), {"A", "B"});
      runs[r].labeled = count_labeled(runs[r].labels);
    }
    EXPECT_EQ(select_most_labeled(runs), most_labeled_oracle(runs));
  }
  std::vector<PredicateRun> tie(2);
  tie[0].labeled = tie[1].labeled = 3;
  EXPECT_EQ(select_most_labeled(tie), 0u);
}

TEST(Collapse, AnnotateKeepsMostLabeledRun) {
  SrlModel m(small_config(), roles(), 19);
  const Words w{"John", "said", "Mary", "bought", "a", "car"};
  const auto a = annotate(w, m, oracle::FixedPos({"NNP", "VBD", "NNP", "VBD", "DT", "NN"}));
  ASSERT_EQ(a.runs.size(), 2u);
  EXPECT_EQ(a.runs[0].predicate, 1u);
  EXPECT_EQ(a.runs[1].predicate, 3u);
  const auto best = most_labeled_oracle(a.runs);
  ASSERT_TRUE(best);
  EXPECT_EQ(a.selected, a.runs[*best].predicate);
  EXPECT_EQ(a.labels, a.runs[*best].labels);
  EXPECT_EQ(a.provenance(), "predicate:" + std::to_string(a.runs[*best].predicate));
  for (const auto& r : a.runs) EXPECT_EQ(r.labels, m.predict(w, r.predicate));
}

TEST(Collapse, VerblessSentenceIsAllOutside) {
  SrlModel m(small_config(), roles(), 19);
  const Words w{"choppy", "water", "today"};
  const auto a = annotate(w, m, oracle::FixedPos({"JJ", "NN", "NN"}));
  EXPECT_TRUE(a.runs.empty());
  EXPECT_FALSE(a.selected);
  EXPECT_EQ(a.labels, std::vector<BioTag>(3, BioTag::outside()));
  EXPECT_EQ(a.provenance(), "no-predicate");
  EXPECT_THROW(annotate(Words{}, m, oracle::FixedPos({})), Error);
}

}  // namespace
}  // namespace srlfuse
