#include <sstream>

#include <gtest/gtest.h>

#include "srlfuse/error.hpp"
#include "srlfuse/nli_data.hpp"
#include "srlfuse/squad_data.hpp"
#include "srlfuse/srl_corpus.hpp"

namespace srlfuse {
namespace {

using Words = std::vector<std::string>;

std::string toy(const std::string& name) { return std::string(SRLFUSE_TEST_DATA_DIR) + "/toy/" + name; }

// Runs `f` and returns the message of the srlfuse::Error it throws.
template <class F>
std::string error_of(F&& f, ErrorKind expected = ErrorKind::kData) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), expected) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

std::vector<SrlExample> read_srl(const std::string& text) {
  std::istringstream in(text);
  return read_srl_corpus(in, "mem");
}

TEST(SrlCorpus, ReadsBlocks) {
  const auto ex = read_srl(
      "# comment\n"
      "John\t0\tB-ARG0\nate\t1\tB-V\nfish\t0\tB-ARG1\n\n\n"
      "Mary\t0\tB-ARG0\nsaid\t0\tO\nhi\t1\tB-V\r\n");
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[0].tokens, (Words{"John", "ate", "fish"}));
  EXPECT_EQ(ex[0].predicate, 1u);
  EXPECT_EQ(tag_strings(ex[1].tags), (Words{"B-ARG0", "O", "B-V"}));
  EXPECT_EQ(ex[1].predicate, 2u);
  EXPECT_TRUE(read_srl("").empty());
}

TEST(SrlCorpus, WriteReadRoundTrip) {
  const auto ex = read_srl("a\t0\tB-ARG0\nb\t0\tI-ARG0\nc\t1\tB-V\n\nd\t1\tB-V\n");
  std::ostringstream out;
  write_srl_corpus(out, ex);
  const auto back = read_srl(out.str());
  ASSERT_EQ(back.size(), ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) {
    EXPECT_EQ(back[i].tokens, ex[i].tokens);
    EXPECT_EQ(back[i].predicate, ex[i].predicate);
    EXPECT_EQ(back[i].tags, ex[i].tags);
  }
}

TEST(SrlCorpus, Errors) {
  EXPECT_NE(error_of([] { read_srl("a\t0\n"); }).find("mem:1"), std::string::npos);
  EXPECT_NE(error_of([] { read_srl("a\t1\tO\nb\t1\tO\n"); }).find("second predicate"), std::string::npos);
  EXPECT_NE(error_of([] { read_srl("a\t2\tO\n"); }).find("0 or 1"), std::string::npos);
  EXPECT_NE(error_of([] { read_srl("a\t0\tO\n"); }).find("no marked predicate"), std::string::npos);
  EXPECT_NE(error_of([] { read_srl("a\t1\tB-V\nb\t0\tI-ARG1\n"); }).find("token 1"), std::string::npos);
  error_of([] { read_srl("a\t1\tX-V\n"); });
  error_of([] { load_srl_corpus("/nonexistent/corpus.conll"); }, ErrorKind::kIo);
}

TEST(SrlCorpus, ToyFilesLoad) {
  const auto basic = load_srl_corpus(toy("srl_basic.conll"));
  const auto full = load_srl_corpus(toy("srl_full.conll"));
  EXPECT_EQ(basic.size(), 30u);
  EXPECT_EQ(full.size(), 40u);
}

NliDataset read_nli(const std::string& text) {
  std::istringstream in(text);
  return read_nli_jsonl(in, "nli");
}

TEST(NliData, ReadsAndSkipsUnlabelled) {
  const auto d = read_nli(
      R"({"sentence1": "A man sleeps.", "sentence2": "A man rests.", "gold_label": "entailment"})"
      "\n\n"
      R"({"sentence1": "A b.", "sentence2": "C d.", "gold_label": "-"})"
      "\n");
  ASSERT_EQ(d.examples.size(), 1u);
  EXPECT_EQ(d.skipped, 1u);
  EXPECT_EQ(d.examples[0].premise, (Words{"A", "man", "sleeps", "."}));
  EXPECT_EQ(d.examples[0].label, NliLabel::kEntailment);
}

TEST(NliData, Errors) {
  EXPECT_NE(error_of([] { read_nli("{\n"); }).find("nli:1"), std::string::npos);
  EXPECT_NE(error_of([] {
              read_nli("\n" R"({"sentence1": "a", "sentence2": "b", "gold_label": "maybe"})");
            }).find("nli:2"),
            std::string::npos);
  error_of([] { read_nli(R"({"sentence1": "a", "gold_label": "neutral"})"); });
  error_of([] { read_nli(R"({"sentence1": "", "sentence2": "b", "gold_label": "neutral"})"); });
  error_of([] { load_nli_jsonl("/nonexistent.jsonl"); }, ErrorKind::kIo);
}

TEST(NliData, ToyFilesBalanced) {
  const auto train = load_nli_jsonl(toy("nli_train.jsonl"));
  EXPECT_EQ(train.examples.size(), 200u);
  int counts[3] = {0, 0, 0};
  for (const auto& ex : train.examples) ++counts[static_cast<int>(ex.label)];
  for (int c : counts) EXPECT_GE(c, 66);
  const auto dev = load_nli_jsonl(toy("nli_dev.jsonl"));
  EXPECT_EQ(dev.examples.size(), 30u);
  EXPECT_EQ(dev.skipped, 1u);
}

std::vector<ReadingExample> read_squad(const std::string& text) {
  std::istringstream in(text);
  return read_squad_json(in, "squad");
}

TEST(SquadData, AlignsAnswerByOffset) {
  // "rock" occurs twice; the offset picks the second occurrence.
  const auto ex = read_squad(R"({"data": [{"paragraphs": [{"context": "A rock, then another rock.",
      "qas": [{"id": "q1", "question": "What again?", "answers": [{"text": "rock", "answer_start": 21},
                                                                 {"text": "another rock"}]}]}]}]})");
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].id, "q1");
  EXPECT_EQ(ex[0].answer_start, 5);
  EXPECT_EQ(ex[0].answer_end, 5);
  EXPECT_EQ(ex[0].answers, (Words{"rock", "another rock"}));
  EXPECT_EQ(ex[0].span_text(4, 5), "another rock");
  EXPECT_EQ(ex[0].question, (Words{"What", "again", "?"}));
}

TEST(SquadData, OffsetsCountCodePoints) {
  EXPECT_EQ(utf8_byte_offset("caf\xc3\xa9 x", 4), 5u);
  EXPECT_EQ(utf8_byte_offset("abc", 10), 3u);
  const auto ex = read_squad(R"({"data": [{"paragraphs": [{"context": "Café owners like café owners.",
      "qas": [{"id": "u", "question": "Who?", "answers": [{"text": "café owners", "answer_start": 17}]}]}]}]})");
  EXPECT_EQ(ex[0].answer_start, 3);
  EXPECT_EQ(ex[0].answer_end, 4);
}

TEST(SquadData, Errors) {
  EXPECT_NE(error_of([] {
              read_squad(R"({"data": [{"paragraphs": [{"context": "A b c.",
                  "qas": [{"id": "x9", "question": "Q?", "answers": [{"text": "zebra", "answer_start": 0}]}]}]}]})");
            }).find("x9"),
            std::string::npos);
  error_of([] { read_squad("{"); });
  error_of([] { read_squad(R"({"version": "1.1"})"); });
  error_of([] { load_squad_json("/nonexistent.json"); }, ErrorKind::kIo);
}

TEST(SquadData, ToyRockQuestion) {
  const auto train = load_squad_json(toy("squad_train.json"));
  EXPECT_EQ(train.size(), 50u);
  const auto& rock = train.front();
  EXPECT_EQ(rock.id, "rock-0");
  EXPECT_EQ(rock.span_text(rock.answer_start, rock.answer_end), "heat and pressure");
  EXPECT_EQ(load_squad_json(toy("squad_dev.json")).size(), 12u);
}

}  // namespace
}  // namespace srlfuse
