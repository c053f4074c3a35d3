#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlfuse/embedding.hpp"
#include "srlfuse/esim.hpp"
#include "srlfuse/named_entity.hpp"
#include "srlfuse/predicate.hpp"
#include "srlfuse/reader.hpp"
#include "srlfuse/srl.hpp"

namespace srlfuse {

enum class TagSource { kNone, kSrl, kPos, kNe };

const char* to_string(TagSource source);
TagSource parse_tag_source(std::string_view text);  // throws Error(kConfig)

// Produces one string label per token for the downstream tag channel.
class TokenTagger {
 public:
  virtual ~TokenTagger() = default;
  virtual std::vector<std::string> tag(std::span<const std::string> tokens) const = 0;
  // Closed label set; every tag() output is drawn from it.
  virtual std::vector<std::string> labels() const = 0;
};

// Runs the SRL labeler sentence by sentence and emits the collapsed BIO labels.
class SrlTokenTagger final : public TokenTagger {
 public:
  SrlTokenTagger(std::shared_ptr<const SrlModel> model, std::shared_ptr<const PosProvider> pos);
  std::vector<std::string> tag(std::span<const std::string> tokens) const override;
  std::vector<std::string> labels() const override;

 private:
  std::shared_ptr<const SrlModel> model_;
  std::shared_ptr<const PosProvider> pos_;
};

class PosTokenTagger final : public TokenTagger {
 public:
  explicit PosTokenTagger(std::shared_ptr<const PosProvider> pos);
  std::vector<std::string> tag(std::span<const std::string> tokens) const override;
  std::vector<std::string> labels() const override;

 private:
  std::shared_ptr<const PosProvider> pos_;
};

class NeTokenTagger final : public TokenTagger {
 public:
  explicit NeTokenTagger(std::shared_ptr<const NeProvider> ne);
  std::vector<std::string> tag(std::span<const std::string> tokens) const override;
  std::vector<std::string> labels() const override;

 private:
  std::shared_ptr<const NeProvider> ne_;
};

void apply_tags(std::vector<EntailmentExample>& data, const TokenTagger& tagger);
void apply_tags(std::vector<ReadingExample>& data, const TokenTagger& tagger);

Vocabulary build_word_vocabulary(std::span<const EntailmentExample> data);
Vocabulary build_word_vocabulary(std::span<const ReadingExample> data);
Vocabulary build_char_vocabulary(std::span<const EntailmentExample> data);
Vocabulary build_char_vocabulary(std::span<const ReadingExample> data);

}  // namespace srlfuse
