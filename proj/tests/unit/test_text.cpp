#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/hashing.hpp"
#include "srlfuse/named_entity.hpp"
#include "srlfuse/predicate.hpp"
#include "srlfuse/tokenizer.hpp"

namespace srlfuse {
namespace {

using Words = std::vector<std::string>;

TEST(Tokenizer, SplitsPunctuationAndKeepsOffsets) {
  const std::string text = "A man parasails in the choppy water.";
  const auto toks = tokenize(text);
  ASSERT_EQ(toks.size(), 8u);
  EXPECT_EQ(toks.back().text, ".");
  for (const auto& t : toks) EXPECT_EQ(text.substr(t.begin, t.end - t.begin), t.text);
  EXPECT_EQ(tokenize_words("igneous, sedimentary, and metamorphic."),
            (Words{"igneous", ",", "sedimentary", ",", "and", "metamorphic", "."}));
}

TEST(Tokenizer, KeepsInternalApostrophesHyphensAndNumbers) {
  EXPECT_EQ(tokenize_words("re-eroded don't 3.5 1,000"), (Words{"re-eroded", "don't", "3.5", "1,000"}));
  EXPECT_EQ(tokenize_words("(magma)"), (Words{"(", "magma", ")"}));
  EXPECT_TRUE(tokenize_words("   ").empty());
}

TEST(Tokenizer, RejectsInvalidUtf8) { EXPECT_THROW(tokenize("bad \xff byte"), Error); }

TEST(Tokenizer, SentenceRanges) {
  const Words w{"He", "ran", ".", "She", "sat", "!", "Then"};
  const auto r = sentence_ranges(w);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], (std::pair<std::size_t, std::size_t>{0, 3}));
  EXPECT_EQ(r[2], (std::pair<std::size_t, std::size_t>{6, 7}));
}

TEST(Hashing, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const Words s{"a", "b"};
  EXPECT_EQ(sentence_hash(s), fnv1a64("a b"));
  EXPECT_EQ(hex64(255), "00000000000000ff");
}

TEST(PosTagger, LexiconAndSuffixRules) {
  LexiconPosTagger pos;
  EXPECT_EQ(pos.tag(Words{"the"}), Words{"DT"});
  EXPECT_EQ(pos.tag(Words{"sold"}), Words{"VBD"});
  EXPECT_EQ(pos.tag(Words{"xyzzyly"}), Words{"RB"});
  EXPECT_EQ(pos.tag(Words{"42"}), Words{"CD"});
  pos.add("Blorf", "VB");
  EXPECT_EQ(pos.tag(Words{"blorf"}), Words{"VB"});
}

using oracle::FixedPos;

TEST(Predicates, VerbClassMembership) {
  const Words w{"Charlie", "sold", "a", "book"};
  auto m = identify_predicates(make_tokens(w), FixedPos({"NNP", "VBD", "DT", "NN"}));
  EXPECT_EQ(m.flags, (std::vector<bool>{false, true, false, false}));
  const Words nv{"choppy", "water"};
  EXPECT_TRUE(identify_predicates(make_tokens(nv), FixedPos({"JJ", "NN"})).indices().empty());
  const Words two{"parasails", "and", "swims"};
  EXPECT_EQ(identify_predicates(make_tokens(two), FixedPos({"VBZ", "CC", "VBZ"})).indices(),
            (std::vector<std::size_t>{0, 2}));
}

TEST(Predicates, GoldPosWinsAndLengthsAgree) {
  auto toks = make_tokens(Words{"dogs", "bark"});
  toks[0].pos = "NNS";
  toks[1].pos = "VBP";
  EXPECT_EQ(identify_predicates(toks, FixedPos({"VB", "NN"})).indices(), (std::vector<std::size_t>{1}));
  const Words w{"a", "b", "c"};
  try {
    identify_predicates(make_tokens(w), FixedPos({"NN"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(Predicates, FlaggedTokensAreVerbs) {
  LexiconPosTagger pos;
  const Words w = tokenize_words("Charlie sold a book to Sherry last week and quickly walked home .");
  const auto tags = pos.tag(w);
  const auto m = identify_predicates(make_tokens(w), pos);
  ASSERT_EQ(m.size(), w.size());
  for (auto i : m.indices()) EXPECT_TRUE(is_verb_tag(tags[i]));
  EXPECT_EQ(m.indices(), (std::vector<std::size_t>{1, 10}));
}

TEST(NamedEntities, GazetteerAndCapitalisation) {
  GazetteerNeTagger ne;
  const Words w{"Charlie", "sold", "a", "book", "to", "Sherry", "in", "Paris"};
  const auto t = ne.tag(w);
  ASSERT_EQ(t.size(), w.size());
  EXPECT_EQ(t[0], BioTag::begin("PER"));
  EXPECT_EQ(t[1], BioTag::outside());
  EXPECT_EQ(t[5], BioTag::begin("PER"));
  EXPECT_EQ(t[7], BioTag::begin("LOC"));
  for (const auto& tag : t) EXPECT_TRUE(ne.alphabet().find(tag).has_value());
  EXPECT_TRUE(is_valid_bio(t));
}

}  // namespace
}  // namespace srlfuse
