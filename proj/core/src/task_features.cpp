#include "srlfuse/task_features.hpp"

#include "srlfuse/error.hpp"
#include "srlfuse/tokenizer.hpp"

namespace srlfuse {

const char* to_string(TagSource source) {
  switch (source) {
    case TagSource::kNone: return "none";
    case TagSource::kSrl: return "srl";
    case TagSource::kPos: return "pos";
    case TagSource::kNe: return "ne";
  }
  return "?";
}

TagSource parse_tag_source(std::string_view text) {
  if (text == "none") return TagSource::kNone;
  if (text == "srl") return TagSource::kSrl;
  if (text == "pos") return TagSource::kPos;
  if (text == "ne") return TagSource::kNe;
  fail(ErrorKind::kConfig, "unknown tag source '" + std::string(text) + "' (expected none, srl, pos or ne)");
}

SrlTokenTagger::SrlTokenTagger(std::shared_ptr<const SrlModel> model, std::shared_ptr<const PosProvider> pos)
    : model_(std::move(model)), pos_(std::move(pos)) {
  if (!model_ || !pos_) fail(ErrorKind::kInvalidArgument, "SRL tagger needs a model and a POS provider");
}

std::vector<std::string> SrlTokenTagger::tag(std::span<const std::string> tokens) const {
  const std::vector<std::string> words(tokens.begin(), tokens.end());
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& [b, e] : sentence_ranges(words)) {
    const std::span<const std::string> sentence(words.data() + b, e - b);
    for (const auto& t : annotate(sentence, *model_, *pos_).labels) out.push_back(t.str());
  }
  return out;
}

std::vector<std::string> SrlTokenTagger::labels() const { return model_->alphabet().tag_names(); }

PosTokenTagger::PosTokenTagger(std::shared_ptr<const PosProvider> pos) : pos_(std::move(pos)) {
  if (!pos_) fail(ErrorKind::kInvalidArgument, "POS tagger needs a provider");
}

std::vector<std::string> PosTokenTagger::tag(std::span<const std::string> tokens) const {
  const auto t = make_tokens(tokens);
  return resolve_pos(t, *pos_);
}

std::vector<std::string> PosTokenTagger::labels() const { return penn_tagset(); }

NeTokenTagger::NeTokenTagger(std::shared_ptr<const NeProvider> ne) : ne_(std::move(ne)) {
  if (!ne_) fail(ErrorKind::kInvalidArgument, "NE tagger needs a provider");
}

std::vector<std::string> NeTokenTagger::tag(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  for (const auto& t : ne_->tag(tokens)) out.push_back(t.str());
  return out;
}

std::vector<std::string> NeTokenTagger::labels() const { return ne_->alphabet().tag_names(); }

void apply_tags(std::vector<EntailmentExample>& data, const TokenTagger& tagger) {
  for (auto& ex : data) {
    ex.premise_tags = tagger.tag(ex.premise);
    ex.hypothesis_tags = tagger.tag(ex.hypothesis);
  }
}

void apply_tags(std::vector<ReadingExample>& data, const TokenTagger& tagger) {
  // Questions over one paragraph share the document; tag it once.
  const std::string* last_context = nullptr;
  std::vector<std::string> doc_tags;
  for (auto& ex : data) {
    if (!last_context || *last_context != ex.context) {
      doc_tags = tagger.tag(ex.document_words());
      last_context = &ex.context;
    }
    ex.document_tags = doc_tags;
    ex.question_tags = tagger.tag(ex.question);
  }
}

namespace {

void add_chars(Vocabulary& v, const std::vector<std::string>& words) {
  for (const auto& w : words)
    for (const auto& c : utf8_chars(w)) v.add(c);
}

}  // namespace

Vocabulary build_word_vocabulary(std::span<const EntailmentExample> data) {
  Vocabulary v;
  for (const auto& ex : data) {
    for (const auto& w : ex.premise) v.add(w);
    for (const auto& w : ex.hypothesis) v.add(w);
  }
  return v;
}

Vocabulary build_word_vocabulary(std::span<const ReadingExample> data) {
  Vocabulary v;
  for (const auto& ex : data) {
    for (const auto& t : ex.document) v.add(t.text);
    for (const auto& w : ex.question) v.add(w);
  }
  return v;
}

Vocabulary build_char_vocabulary(std::span<const EntailmentExample> data) {
  Vocabulary v;
  for (const auto& ex : data) {
    add_chars(v, ex.premise);
    add_chars(v, ex.hypothesis);
  }
  return v;
}

Vocabulary build_char_vocabulary(std::span<const ReadingExample> data) {
  Vocabulary v;
  for (const auto& ex : data) {
    add_chars(v, ex.document_words());
    add_chars(v, ex.question);
  }
  return v;
}

}  // namespace srlfuse
