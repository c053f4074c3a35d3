#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace srlfuse {

struct Token {
  std::string text;
  std::optional<std::string> pos;
};

std::vector<Token> make_tokens(std::span<const std::string> words);

// One flag per token; true marks a verbal predicate.
struct PredicateMarking {
  std::vector<bool> flags;

  std::size_t size() const noexcept { return flags.size(); }
  std::vector<std::size_t> indices() const;
  static PredicateMarking single(std::size_t length, std::size_t index);
};

class PosProvider {
 public:
  virtual ~PosProvider() = default;
  // One Penn tag per token. Must be safe for concurrent calls.
  virtual std::vector<std::string> tag(std::span<const std::string> tokens) const = 0;
};

// Deterministic fallback tagger: a closed-class and common-word lexicon, then
// suffix and shape heuristics. Unknown lowercase words default to NN.
//
// Lexicon files are two whitespace-separated columns, `word TAG`, one entry
// per line; '#' starts a comment. Lookups are case-insensitive.
class LexiconPosTagger final : public PosProvider {
 public:
  // Loads the bundled lexicon.
  LexiconPosTagger();

  static LexiconPosTagger from_file(const std::string& path, bool include_builtin = true);
  void read_lexicon(std::istream& in);
  void add(std::string_view word, std::string tag);

  std::vector<std::string> tag(std::span<const std::string> tokens) const override;
  std::string tag_word(std::string_view word, bool sentence_initial) const;

 private:
  explicit LexiconPosTagger(bool load_builtin);
  std::unordered_map<std::string, std::string> lexicon_;
};

// Penn verb tags: VB, VBD, VBG, VBN, VBP, VBZ.
bool is_verb_tag(std::string_view pos);

// Penn Treebank tag inventory used by the fallback tagger.
const std::vector<std::string>& penn_tagset();

// Gold POS on a token wins; the provider is consulted only for tokens
// without one. Auxiliaries and copulas are flagged like any other verb.
PredicateMarking identify_predicates(std::span<const Token> tokens, const PosProvider& tagger);

std::vector<std::string> resolve_pos(std::span<const Token> tokens, const PosProvider& tagger);

}  // namespace srlfuse
