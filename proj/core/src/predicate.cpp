#include "srlfuse/predicate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "srlfuse/error.hpp"

namespace srlfuse {

namespace {

struct LexEntry {
  const char* word;
  const char* tag;
};

// Closed-class words plus the common open-class words the bundled corpora use.
constexpr std::array kBuiltinLexicon = std::to_array<LexEntry>({
    {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"}, {"these", "DT"},
    {"those", "DT"}, {"every", "DT"}, {"each", "DT"}, {"some", "DT"}, {"any", "DT"}, {"no", "DT"},
    {"all", "DT"}, {"another", "DT"}, {"both", "DT"},
    {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"of", "IN"}, {"for", "IN"}, {"with", "IN"},
    {"by", "IN"}, {"from", "IN"}, {"into", "IN"}, {"as", "IN"}, {"about", "IN"}, {"after", "IN"},
    {"before", "IN"}, {"during", "IN"}, {"through", "IN"}, {"over", "IN"}, {"under", "IN"},
    {"between", "IN"}, {"because", "IN"}, {"since", "IN"}, {"while", "IN"}, {"than", "IN"},
    {"if", "IN"}, {"upon", "IN"}, {"within", "IN"}, {"without", "IN"}, {"near", "IN"},
    {"across", "IN"}, {"behind", "IN"}, {"due", "JJ"},
    {"to", "TO"},
    {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"yet", "CC"},
    {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"}, {"we", "PRP"},
    {"they", "PRP"}, {"me", "PRP"}, {"him", "PRP"}, {"us", "PRP"}, {"them", "PRP"},
    {"his", "PRP$"}, {"her", "PRP$"}, {"its", "PRP$"}, {"their", "PRP$"}, {"our", "PRP$"},
    {"my", "PRP$"}, {"your", "PRP$"},
    {"what", "WP"}, {"who", "WP"}, {"whom", "WP"}, {"which", "WDT"}, {"whose", "WP$"},
    {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"}, {"how", "WRB"},
    {"can", "MD"}, {"could", "MD"}, {"will", "MD"}, {"would", "MD"}, {"shall", "MD"},
    {"should", "MD"}, {"may", "MD"}, {"might", "MD"}, {"must", "MD"},
    {"not", "RB"}, {"also", "RB"}, {"then", "RB"}, {"very", "RB"}, {"once", "RB"}, {"again", "RB"},
    {"here", "RB"}, {"there", "EX"}, {"often", "RB"}, {"never", "RB"}, {"always", "RB"},
    {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"}, {"were", "VBD"}, {"be", "VB"}, {"been", "VBN"},
    {"being", "VBG"}, {"am", "VBP"}, {"has", "VBZ"}, {"have", "VBP"}, {"had", "VBD"},
    {"does", "VBZ"}, {"do", "VBP"}, {"did", "VBD"},
    {"sold", "VBD"}, {"sells", "VBZ"}, {"sell", "VB"}, {"bought", "VBD"}, {"buys", "VBZ"},
    {"gave", "VBD"}, {"gives", "VBZ"}, {"give", "VB"}, {"given", "VBN"}, {"ate", "VBD"},
    {"eats", "VBZ"}, {"eat", "VB"}, {"saw", "VBD"}, {"sees", "VBZ"}, {"see", "VB"},
    {"made", "VBD"}, {"makes", "VBZ"}, {"make", "VB"}, {"took", "VBD"}, {"takes", "VBZ"},
    {"wrote", "VBD"}, {"writes", "VBZ"}, {"found", "VBD"}, {"finds", "VBZ"}, {"told", "VBD"},
    {"tells", "VBZ"}, {"sent", "VBD"}, {"sends", "VBZ"}, {"built", "VBD"}, {"builds", "VBZ"},
    {"drew", "VBD"}, {"caught", "VBD"}, {"threw", "VBD"}, {"brought", "VBD"}, {"taught", "VBD"},
    {"lent", "VBD"}, {"read", "VBD"}, {"met", "VBD"}, {"won", "VBD"}, {"held", "VBD"},
    {"changes", "VBZ"}, {"change", "VB"}, {"parasails", "VBZ"}, {"parasailed", "VBD"},
    {"swims", "VBZ"}, {"swam", "VBD"}, {"runs", "VBZ"}, {"ran", "VBD"}, {"sings", "VBZ"},
    {"sang", "VBD"}, {"rides", "VBZ"}, {"rode", "VBD"}, {"plays", "VBZ"}, {"reads", "VBZ"},
    {"sleeps", "VBZ"}, {"slept", "VBD"}, {"cooks", "VBZ"}, {"paints", "VBZ"}, {"climbs", "VBZ"},
    {"dances", "VBZ"}, {"jumps", "VBZ"}, {"walks", "VBZ"}, {"surfs", "VBZ"}, {"skis", "VBZ"},
    {"sits", "VBZ"}, {"sat", "VBD"}, {"stands", "VBZ"}, {"stood", "VBD"}, {"gives", "VBZ"},
    {"crystallizes", "VBZ"}, {"happens", "VBZ"}, {"becoming", "VBG"}, {"formed", "VBN"},
    {"book", "NN"}, {"water", "NN"}, {"week", "NN"}, {"man", "NN"}, {"woman", "NN"},
    {"rock", "NN"}, {"heat", "NN"}, {"pressure", "NN"}, {"content", "NN"}, {"fabric", "NN"},
    {"magma", "NN"}, {"lava", "NN"}, {"melt", "NN"}, {"cycle", "NN"}, {"concept", "NN"},
    {"geology", "NN"}, {"competition", "NN"}, {"day", "NN"}, {"year", "NN"}, {"morning", "NN"},
    {"evening", "NN"}, {"night", "NN"}, {"yesterday", "NN"}, {"today", "NN"}, {"tomorrow", "NN"},
    {"boy", "NN"}, {"girl", "NN"}, {"dog", "NN"}, {"cat", "NN"}, {"child", "NN"}, {"people", "NNS"},
    {"last", "JJ"}, {"choppy", "JJ"}, {"calm", "JJ"}, {"new", "JJ"}, {"old", "JJ"}, {"big", "JJ"},
    {"small", "JJ"}, {"red", "JJ"}, {"blue", "JJ"}, {"green", "JJ"}, {"cold", "JJ"}, {"warm", "JJ"},
    {"three", "CD"}, {"two", "CD"}, {"one", "CD"}, {"four", "CD"}, {"five", "CD"},
    {"major", "JJ"}, {"important", "JJ"}, {"igneous", "JJ"}, {"sedimentary", "JJ"},
    {"metamorphic", "JJ"}, {"characteristic", "JJ"}, {"additional", "JJ"}, {"mineral", "NN"},
});

constexpr std::array kPennTags = std::to_array<const char*>({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS",
    "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG",
    "VBN", "VBP", "VBZ", "WDT", "WP", "WP$", "WRB", ".", ",", ":", "``", "''", "-LRB-", "-RRB-",
    "#", "$",
});

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string punct_tag(std::string_view w) {
  if (w == "." || w == "!" || w == "?") return ".";
  if (w == ",") return ",";
  if (w == ":" || w == ";" || w == "-" || w == "--") return ":";
  if (w == "(" || w == "[" || w == "{") return "-LRB-";
  if (w == ")" || w == "]" || w == "}") return "-RRB-";
  if (w == "\"" || w == "'") return "''";
  if (w == "`") return "``";
  if (w == "$") return "$";
  if (w == "#") return "#";
  return "SYM";
}

}  // namespace

std::vector<Token> make_tokens(std::span<const std::string> words) {
  std::vector<Token> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back({w, std::nullopt});
  return out;
}

std::vector<std::size_t> PredicateMarking::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) out.push_back(i);
  return out;
}

PredicateMarking PredicateMarking::single(std::size_t length, std::size_t index) {
  if (index >= length) fail(ErrorKind::kOutOfRange, "predicate index outside sentence");
  PredicateMarking m{std::vector<bool>(length, false)};
  m.flags[index] = true;
  return m;
}

LexiconPosTagger::LexiconPosTagger() : LexiconPosTagger(true) {}

LexiconPosTagger::LexiconPosTagger(bool load_builtin) {
  if (!load_builtin) return;
  for (const auto& e : kBuiltinLexicon) lexicon_.emplace(e.word, e.tag);
}

LexiconPosTagger LexiconPosTagger::from_file(const std::string& path, bool include_builtin) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open POS lexicon " + path);
  LexiconPosTagger tagger(include_builtin);
  tagger.read_lexicon(in);
  return tagger;
}

void LexiconPosTagger::read_lexicon(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos && (hash == 0 || std::isspace(static_cast<unsigned char>(line[hash - 1]))))
      line.resize(hash);
    std::istringstream fields(line);
    std::string word, tag, extra;
    if (!(fields >> word)) continue;
    if (!(fields >> tag) || (fields >> extra))
      fail(ErrorKind::kData, "POS lexicon line " + std::to_string(lineno) + ": expected 'word TAG'");
    add(word, tag);
  }
}

void LexiconPosTagger::add(std::string_view word, std::string tag) { lexicon_[lower(word)] = std::move(tag); }

std::string LexiconPosTagger::tag_word(std::string_view word, bool /*sentence_initial*/) const {
  if (word.empty()) return "SYM";
  const auto first = static_cast<unsigned char>(word.front());
  if (word.size() <= 2 && std::ispunct(first) && std::all_of(word.begin(), word.end(), [](unsigned char c) {
        return std::ispunct(c) != 0;
      }))
    return punct_tag(word);
  if (std::all_of(word.begin(), word.end(), [](unsigned char c) {
        return std::isdigit(c) || c == '.' || c == ',';
      }) &&
      std::isdigit(first))
    return "CD";

  const std::string w = lower(word);
  if (auto it = lexicon_.find(w); it != lexicon_.end()) return it->second;
  if (std::isupper(first)) return "NNP";

  if (ends_with(w, "ly")) return "RB";
  if (ends_with(w, "ing")) return "VBG";
  if (ends_with(w, "ed")) return "VBD";
  if (ends_with(w, "izes") || ends_with(w, "ises")) return "VBZ";
  for (std::string_view s : {"ness", "ment", "tion", "sion", "ity", "ism"})
    if (ends_with(w, s)) return "NN";
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "ic", "al", "less"})
    if (ends_with(w, s)) return "JJ";
  if (ends_with(w, "s") && !ends_with(w, "ss")) return "NNS";
  return "NN";
}

std::vector<std::string> LexiconPosTagger::tag(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back(tag_word(tokens[i], i == 0));
  return out;
}

bool is_verb_tag(std::string_view pos) {
  return pos == "VB" || pos == "VBD" || pos == "VBG" || pos == "VBN" || pos == "VBP" || pos == "VBZ";
}

const std::vector<std::string>& penn_tagset() {
  static const std::vector<std::string> tags(kPennTags.begin(), kPennTags.end());
  return tags;
}

std::vector<std::string> resolve_pos(std::span<const Token> tokens, const PosProvider& tagger) {
  const bool all_gold = std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.pos.has_value(); });
  std::vector<std::string> tags;
  if (!all_gold) {
    std::vector<std::string> words;
    words.reserve(tokens.size());
    for (const auto& t : tokens) words.push_back(t.text);
    try {
      tags = tagger.tag(words);
    } catch (const std::exception& e) {
      std::string context;
      for (const auto& w : words) context += (context.empty() ? "" : " ") + w;
      fail(ErrorKind::kData, std::string("POS provider failed on sentence \"") + context + "\": " + e.what());
    }
    if (tags.size() != tokens.size())
      fail(ErrorKind::kData, "POS provider returned " + std::to_string(tags.size()) + " tags for " +
                                 std::to_string(tokens.size()) + " tokens");
  } else {
    tags.resize(tokens.size());
  }
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].pos) tags[i] = *tokens[i].pos;
  return tags;
}

PredicateMarking identify_predicates(std::span<const Token> tokens, const PosProvider& tagger) {
  if (tokens.empty()) fail(ErrorKind::kInvalidArgument, "identify_predicates requires a non-empty sentence");
  for (const auto& t : tokens)
    if (t.text.empty()) fail(ErrorKind::kInvalidArgument, "token text must be non-empty");
  const auto tags = resolve_pos(tokens, tagger);
  PredicateMarking marking{std::vector<bool>(tokens.size(), false)};
  for (std::size_t i = 0; i < tags.size(); ++i) marking.flags[i] = is_verb_tag(tags[i]);
  return marking;
}

}  // namespace srlfuse
