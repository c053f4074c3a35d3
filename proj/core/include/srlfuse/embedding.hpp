#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srlfuse/bio.hpp"
#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/predicate.hpp"

namespace srlfuse {

using nn::Matrix;

// String <-> id map. Id 0 is always the unknown-word entry.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  explicit Vocabulary(std::string unknown = "<unk>");
  Vocabulary(std::vector<std::string> words, std::string unknown);

  int add(std::string_view word);
  std::optional<int> find(std::string_view word) const;
  int id(std::string_view word) const;  // kUnknown when absent
  std::vector<int> ids(std::span<const std::string> words) const;
  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Per-token joint vectors plus the width of each concatenated channel.
struct FusedEmbeddingSequence {
  Matrix vectors;
  std::vector<std::pair<std::string, Eigen::Index>> channels;

  Eigen::Index length() const { return vectors.rows(); }
  Eigen::Index width() const { return vectors.cols(); }
};

// output[i] = word_vecs[i] ++ tag_vecs[i]. Throws Error(kDimension) when the
// row counts differ.
FusedEmbeddingSequence fuse(const Matrix& word_vecs, const Matrix& tag_vecs);
nn::Var fuse(nn::Var word_vecs, nn::Var tag_vecs);

class WordEmbeddingTable {
 public:
  WordEmbeddingTable(nn::ParameterSet& params, const std::string& name, Vocabulary vocab, int dim, nn::Rng& rng,
                     bool trainable = true);

  // Overwrites rows of known words from a text vector file (`word f1 .. fd`
  // per line). Returns how many rows were replaced.
  std::size_t load_pretrained(const std::string& path);

  int dim() const { return static_cast<int>(table_->value.cols()); }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  nn::Parameter& table() const { return *table_; }
  nn::Var embed(nn::Graph& g, std::span<const std::string> words) const;

 private:
  Vocabulary vocab_;
  nn::Parameter* table_;
};

// Reads `word f1 .. fd` lines. Every row must have the same width.
std::pair<std::vector<std::string>, Matrix> read_text_vectors(const std::string& path);

// Lookup table over a closed label set (SRL BIO tags, POS tags, NE tags).
// Rows start uniform in [-0.1, 0.1] and are trained with the downstream model.
class TagEmbeddingTable {
 public:
  static constexpr int kDefaultDim = 5;
  static constexpr double kInitScale = 0.1;

  TagEmbeddingTable(nn::ParameterSet& params, const std::string& name, std::vector<std::string> labels, int dim,
                    nn::Rng& rng);
  static TagEmbeddingTable for_alphabet(nn::ParameterSet& params, const std::string& name,
                                        const TagAlphabet& alphabet, int dim, nn::Rng& rng);

  int dim() const { return static_cast<int>(table_->value.cols()); }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  // Throws Error(kData) for labels outside the closed set.
  int id(std::string_view label) const;

  nn::Var embed(nn::Graph& g, std::span<const std::string> labels) const;
  nn::Var embed_tags(nn::Graph& g, std::span<const BioTag> tags) const;
  Matrix embed_tags(std::span<const BioTag> tags) const;

  nn::Parameter& table() const { return *table_; }
  // Number of lookups served so far.
  std::size_t access_count() const { return accesses_->load(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  nn::Parameter* table_;
  std::shared_ptr<std::atomic<std::size_t>> accesses_;
};

// Two rows: row 0 for ordinary tokens, row 1 for the marked predicate.
class PredicateIndicatorEmbedding {
 public:
  PredicateIndicatorEmbedding(nn::ParameterSet& params, const std::string& name, int dim, nn::Rng& rng);

  int dim() const { return static_cast<int>(table_->value.cols()); }
  nn::Var embed(nn::Graph& g, const PredicateMarking& marking) const;

 private:
  nn::Parameter* table_;
};

// Source of per-token contextual vectors. Implementations are deterministic
// and read-only after construction.
class ContextualEmbedder {
 public:
  virtual ~ContextualEmbedder() = default;
  virtual int dim() const = 0;
  virtual Matrix embed(std::span<const std::string> tokens) const = 0;
};

struct ContextualSpec {
  std::string kind = "hash";  // hash | cache | static
  int dim = 64;
  std::uint64_t seed = 1234;
  int window = 1;
  std::string path;  // cache or static vector file
};

// Seeded-hash stand-in for a pretrained contextual encoder: the vector for
// token i mixes hashed vectors of tokens i-w .. i+w, weighted 2^-|offset|,
// each keyed by its offset, so equal tokens in different contexts differ.
class HashContextualEmbedder final : public ContextualEmbedder {
 public:
  static constexpr int kDefaultDim = 64;

  explicit HashContextualEmbedder(int dim = kDefaultDim, std::uint64_t seed = 1234, int window = 1);
  int dim() const override { return dim_; }
  Matrix embed(std::span<const std::string> tokens) const override;

 private:
  Eigen::RowVectorXd hashed(std::string_view token, int offset) const;
  int dim_;
  std::uint64_t seed_;
  int window_;
};

// Precomputed vectors keyed by (sentence hash, word position). File format:
//
//   srlfuse-contextual-cache 1 <dim>
//   <sentence-hash-hex> <word-position> <subword-index> f1 .. fd
//
// The sentence hash is hex64(sentence_hash(tokens)). Only subword index 0 is
// kept: a word takes the vector of its first subunit.
class CachedContextualEmbedder final : public ContextualEmbedder {
 public:
  static constexpr int kFormatVersion = 1;

  static CachedContextualEmbedder load(const std::string& path);
  explicit CachedContextualEmbedder(int dim) : dim_(dim) {}

  void insert(std::uint64_t sentence, int position, Eigen::RowVectorXd vec);
  int dim() const override { return dim_; }
  // Throws Error(kData) when a position is missing from the cache.
  Matrix embed(std::span<const std::string> tokens) const override;
  std::size_t entries() const noexcept { return table_.size(); }

 private:
  int dim_;
  std::unordered_map<std::uint64_t, std::unordered_map<int, Eigen::RowVectorXd>> table_;
};

// Fixed word-vector table used as the contextual channel; unknown words map
// to a zero row.
class StaticWordEmbedder final : public ContextualEmbedder {
 public:
  static StaticWordEmbedder load(const std::string& path);
  StaticWordEmbedder(std::vector<std::string> words, Matrix vectors);

  int dim() const override { return static_cast<int>(vectors_.cols()); }
  Matrix embed(std::span<const std::string> tokens) const override;

 private:
  std::unordered_map<std::string, Eigen::Index> index_;
  Matrix vectors_;
};

std::shared_ptr<const ContextualEmbedder> make_contextual(const ContextualSpec& spec);

// Splits a token into UTF-8 characters.
std::vector<std::string> utf8_chars(std::string_view token);

// Character convolution with max-pooling over positions. Tokens shorter than
// the kernel are padded on both sides with a dedicated pad symbol.
class CharCnn {
 public:
  static constexpr const char* kPad = "<pad>";

  CharCnn(nn::ParameterSet& params, const std::string& name, Vocabulary chars, int char_dim, int filters,
          int kernel_width, nn::Rng& rng);

  static Vocabulary build_vocab(std::span<const std::vector<std::string>> sentences);

  int dim() const { return static_cast<int>(filters_->value.cols()); }
  int kernel_width() const { return kernel_; }
  std::vector<int> padded_ids(std::string_view token) const;
  nn::Var embed(nn::Graph& g, std::span<const std::string> tokens) const;
  nn::Parameter& char_table() const { return *chars_table_; }
  nn::Parameter& filters() const { return *filters_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }

 private:
  Vocabulary vocab_;
  int kernel_;
  nn::Parameter* chars_table_;
  nn::Parameter* filters_;
  nn::Parameter* bias_;
};

// Channel settings for downstream token encoders.
struct EmbeddingConfig {
  int word_dim = 32;
  int tag_dim = TagEmbeddingTable::kDefaultDim;
  int char_dim = 8;
  int char_filters = 16;
  int char_kernel = 3;
  bool use_word = true;
  bool use_char_cnn = false;
  bool use_contextual = true;
  bool use_tags = true;
  ContextualSpec contextual;
  std::string word_vectors;  // optional pretrained static vectors
};

// Builds e^j = [word | char | contextual] ++ tag for downstream models.
// When tags are disabled the tag table is never consulted.
class TokenEncoder {
 public:
  TokenEncoder(nn::ParameterSet& params, const std::string& name, const EmbeddingConfig& config,
               Vocabulary words, std::optional<Vocabulary> chars, std::vector<std::string> tag_labels, nn::Rng& rng);

  int base_width() const noexcept { return base_width_; }
  int tag_width() const noexcept { return config_.use_tags && tags_ ? tags_->dim() : 0; }
  int width() const noexcept { return base_width_ + tag_width(); }
  bool uses_tags() const noexcept { return config_.use_tags && tags_.has_value(); }

  // Token channel only (no tags), n x base_width.
  nn::Var encode_base(nn::Graph& g, std::span<const std::string> tokens) const;
  // Full fused sequence; `tags` is ignored when tags are disabled.
  nn::Var encode(nn::Graph& g, std::span<const std::string> tokens, std::span<const std::string> tags) const;

  const EmbeddingConfig& config() const noexcept { return config_; }
  const TagEmbeddingTable* tag_table() const { return tags_ ? &*tags_ : nullptr; }
  const WordEmbeddingTable* word_table() const { return words_ ? &*words_ : nullptr; }
  const CharCnn* char_cnn() const { return chars_ ? &*chars_ : nullptr; }

 private:
  EmbeddingConfig config_;
  std::optional<WordEmbeddingTable> words_;
  std::optional<CharCnn> chars_;
  std::shared_ptr<const ContextualEmbedder> contextual_;
  std::optional<TagEmbeddingTable> tags_;
  int base_width_ = 0;
};

}  // namespace srlfuse
