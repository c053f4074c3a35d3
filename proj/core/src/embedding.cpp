#include "srlfuse/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "srlfuse/error.hpp"
#include "srlfuse/hashing.hpp"

namespace srlfuse {

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::string unknown) { add(unknown); }

Vocabulary::Vocabulary(std::vector<std::string> words, std::string unknown) : Vocabulary(std::move(unknown)) {
  for (const auto& w : words) add(w);
}

int Vocabulary::add(std::string_view word) {
  auto [it, inserted] = index_.emplace(std::string(word), static_cast<int>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocabulary::id(std::string_view word) const { return find(word).value_or(kUnknown); }

std::vector<int> Vocabulary::ids(std::span<const std::string> words) const {
  std::vector<int> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

// ---------------------------------------------------------------------------
// Fusion

FusedEmbeddingSequence fuse(const Matrix& word_vecs, const Matrix& tag_vecs) {
  if (word_vecs.rows() != tag_vecs.rows())
    fail(ErrorKind::kDimension, "fuse: " + std::to_string(word_vecs.rows()) + " word rows vs " +
                                    std::to_string(tag_vecs.rows()) + " tag rows");
  FusedEmbeddingSequence out;
  out.vectors.resize(word_vecs.rows(), word_vecs.cols() + tag_vecs.cols());
  out.vectors.leftCols(word_vecs.cols()) = word_vecs;
  out.vectors.rightCols(tag_vecs.cols()) = tag_vecs;
  out.channels = {{"word", word_vecs.cols()}, {"tag", tag_vecs.cols()}};
  return out;
}

nn::Var fuse(nn::Var word_vecs, nn::Var tag_vecs) {
  if (word_vecs.rows() != tag_vecs.rows())
    fail(ErrorKind::kDimension, "fuse: " + std::to_string(word_vecs.rows()) + " word rows vs " +
                                    std::to_string(tag_vecs.rows()) + " tag rows");
  return nn::hcat({word_vecs, tag_vecs});
}

// ---------------------------------------------------------------------------
// Word table

std::pair<std::vector<std::string>, Matrix> read_text_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open word vectors " + path);
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> v;
    double x = 0.0;
    while (fields >> x) v.push_back(x);
    if (!fields.eof()) fail(ErrorKind::kData, path + ":" + std::to_string(lineno) + ": non-numeric vector entry");
    if (v.empty() || (!rows.empty() && v.size() != rows.front().size()))
      fail(ErrorKind::kData, path + ":" + std::to_string(lineno) + ": inconsistent vector width");
    words.push_back(std::move(word));
    rows.push_back(std::move(v));
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return {std::move(words), std::move(m)};
}

WordEmbeddingTable::WordEmbeddingTable(nn::ParameterSet& params, const std::string& name, Vocabulary vocab, int dim,
                                       nn::Rng& rng, bool trainable)
    : vocab_(std::move(vocab)) {
  if (dim <= 0) fail(ErrorKind::kInvalidArgument, "word embedding dimension must be positive");
  table_ = &params.uniform(name, static_cast<Eigen::Index>(vocab_.size()), dim, 0.1, rng);
  table_->set_trainable(trainable);
}

std::size_t WordEmbeddingTable::load_pretrained(const std::string& path) {
  auto [words, vectors] = read_text_vectors(path);
  if (vectors.rows() > 0 && vectors.cols() != table_->value.cols())
    fail(ErrorKind::kData, "pretrained vectors have width " + std::to_string(vectors.cols()) + ", table expects " +
                               std::to_string(table_->value.cols()));
  std::size_t replaced = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (auto id = vocab_.find(words[i])) {
      table_->value.row(*id) = vectors.row(static_cast<Eigen::Index>(i));
      ++replaced;
    }
  }
  return replaced;
}

nn::Var WordEmbeddingTable::embed(nn::Graph& g, std::span<const std::string> words) const {
  const auto ids = vocab_.ids(words);
  return g.lookup(*table_, ids);
}

// ---------------------------------------------------------------------------
// Tag table

TagEmbeddingTable::TagEmbeddingTable(nn::ParameterSet& params, const std::string& name,
                                     std::vector<std::string> labels, int dim, nn::Rng& rng)
    : labels_(std::move(labels)), accesses_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (dim <= 0) fail(ErrorKind::kInvalidArgument, "tag embedding dimension must be positive");
  if (labels_.empty()) fail(ErrorKind::kInvalidArgument, "tag embedding table needs at least one label");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
      fail(ErrorKind::kInvalidArgument, "duplicate tag label " + labels_[i]);
  table_ = &params.uniform(name, static_cast<Eigen::Index>(labels_.size()), dim, kInitScale, rng);
}

TagEmbeddingTable TagEmbeddingTable::for_alphabet(nn::ParameterSet& params, const std::string& name,
                                                  const TagAlphabet& alphabet, int dim, nn::Rng& rng) {
  return TagEmbeddingTable(params, name, alphabet.tag_names(), dim, rng);
}

int TagEmbeddingTable::id(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) fail(ErrorKind::kData, "tag '" + std::string(label) + "' is outside the tag vocabulary");
  return it->second;
}

nn::Var TagEmbeddingTable::embed(nn::Graph& g, std::span<const std::string> labels) const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (const auto& l : labels) ids.push_back(id(l));
  accesses_->fetch_add(1);
  return g.lookup(*table_, ids);
}

nn::Var TagEmbeddingTable::embed_tags(nn::Graph& g, std::span<const BioTag> tags) const {
  const auto names = tag_strings(tags);
  return embed(g, names);
}

Matrix TagEmbeddingTable::embed_tags(std::span<const BioTag> tags) const {
  nn::Graph g(false);
  return embed_tags(g, tags).value();
}

// ---------------------------------------------------------------------------
// Predicate indicator

PredicateIndicatorEmbedding::PredicateIndicatorEmbedding(nn::ParameterSet& params, const std::string& name, int dim,
                                                         nn::Rng& rng) {
  if (dim <= 0) fail(ErrorKind::kInvalidArgument, "predicate indicator dimension must be positive");
  table_ = &params.uniform(name, 2, dim, 0.5, rng);
}

nn::Var PredicateIndicatorEmbedding::embed(nn::Graph& g, const PredicateMarking& marking) const {
  std::vector<int> ids;
  ids.reserve(marking.size());
  for (bool f : marking.flags) ids.push_back(f ? 1 : 0);
  return g.lookup(*table_, ids);
}

// ---------------------------------------------------------------------------
// Contextual embedders

HashContextualEmbedder::HashContextualEmbedder(int dim, std::uint64_t seed, int window)
    : dim_(dim), seed_(seed), window_(window) {
  if (dim <= 0) fail(ErrorKind::kInvalidArgument, "contextual dimension must be positive");
  if (window < 0) fail(ErrorKind::kInvalidArgument, "context window must be non-negative");
}

Eigen::RowVectorXd HashContextualEmbedder::hashed(std::string_view token, int offset) const {
  std::uint64_t state = fnv1a64(token, seed_ ^ splitmix64(static_cast<std::uint64_t>(offset + 1024)));
  Eigen::RowVectorXd v(dim_);
  for (int k = 0; k < dim_; ++k) {
    state = splitmix64(state);
    // Uniform in [-1, 1) from the top 53 bits.
    v(k) = static_cast<double>(state >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }
  return v;
}

Matrix HashContextualEmbedder::embed(std::span<const std::string> tokens) const {
  const auto n = static_cast<int>(tokens.size());
  Matrix out = Matrix::Zero(n, dim_);
  static const std::string kBos = "<s>", kEos = "</s>";
  for (int i = 0; i < n; ++i) {
    for (int d = -window_; d <= window_; ++d) {
      const int j = i + d;
      const std::string& tok = j < 0 ? kBos : (j >= n ? kEos : tokens[static_cast<std::size_t>(j)]);
      out.row(i) += std::ldexp(1.0, -std::abs(d)) * hashed(tok, d);
    }
  }
  return out;
}

CachedContextualEmbedder CachedContextualEmbedder::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open contextual cache " + path);
  std::string magic;
  int version = 0, dim = 0;
  if (!(in >> magic >> version >> dim) || magic != "srlfuse-contextual-cache")
    fail(ErrorKind::kData, path + ": missing contextual cache header");
  if (version != kFormatVersion)
    fail(ErrorKind::kData, path + ": unsupported cache version " + std::to_string(version));
  if (dim <= 0) fail(ErrorKind::kData, path + ": invalid dimension");
  CachedContextualEmbedder cache(dim);
  std::string line;
  std::getline(in, line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string hash;
    int pos = 0, sub = 0;
    if (!(fields >> hash)) continue;
    if (!(fields >> pos >> sub)) fail(ErrorKind::kData, path + ":" + std::to_string(lineno) + ": malformed key");
    Eigen::RowVectorXd v(dim);
    for (int k = 0; k < dim; ++k)
      if (!(fields >> v(k))) fail(ErrorKind::kData, path + ":" + std::to_string(lineno) + ": short vector");
    if (sub != 0) continue;
    cache.insert(std::stoull(hash, nullptr, 16), pos, std::move(v));
  }
  return cache;
}

void CachedContextualEmbedder::insert(std::uint64_t sentence, int position, Eigen::RowVectorXd vec) {
  if (vec.size() != dim_) fail(ErrorKind::kDimension, "cached vector has the wrong width");
  table_[sentence][position] = std::move(vec);
}

Matrix CachedContextualEmbedder::embed(std::span<const std::string> tokens) const {
  const auto key = sentence_hash(tokens);
  auto it = table_.find(key);
  if (it == table_.end()) fail(ErrorKind::kData, "sentence " + hex64(key) + " missing from contextual cache");
  Matrix out(static_cast<Eigen::Index>(tokens.size()), dim_);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto row = it->second.find(static_cast<int>(i));
    if (row == it->second.end())
      fail(ErrorKind::kData, "position " + std::to_string(i) + " of sentence " + hex64(key) + " missing from cache");
    out.row(static_cast<Eigen::Index>(i)) = row->second;
  }
  return out;
}

StaticWordEmbedder StaticWordEmbedder::load(const std::string& path) {
  auto [words, vectors] = read_text_vectors(path);
  return StaticWordEmbedder(std::move(words), std::move(vectors));
}

StaticWordEmbedder::StaticWordEmbedder(std::vector<std::string> words, Matrix vectors) : vectors_(std::move(vectors)) {
  if (vectors_.cols() == 0) fail(ErrorKind::kData, "static embedder needs at least one vector");
  for (std::size_t i = 0; i < words.size(); ++i) index_.emplace(words[i], static_cast<Eigen::Index>(i));
}

Matrix StaticWordEmbedder::embed(std::span<const std::string> tokens) const {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(tokens.size()), vectors_.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (auto it = index_.find(tokens[i]); it != index_.end())
      out.row(static_cast<Eigen::Index>(i)) = vectors_.row(it->second);
  return out;
}

std::shared_ptr<const ContextualEmbedder> make_contextual(const ContextualSpec& spec) {
  if (spec.kind == "hash") return std::make_shared<HashContextualEmbedder>(spec.dim, spec.seed, spec.window);
  if (spec.kind == "cache") return std::make_shared<CachedContextualEmbedder>(CachedContextualEmbedder::load(spec.path));
  if (spec.kind == "static") return std::make_shared<StaticWordEmbedder>(StaticWordEmbedder::load(spec.path));
  fail(ErrorKind::kConfig, "unknown contextual embedder kind '" + spec.kind + "'");
}

// ---------------------------------------------------------------------------
// Character CNN

std::vector<std::string> utf8_chars(std::string_view token) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < token.size()) {
    const auto c = static_cast<unsigned char>(token[i]);
    std::size_t n = c < 0x80 ? 1 : (c & 0xe0) == 0xc0 ? 2 : (c & 0xf0) == 0xe0 ? 3 : (c & 0xf8) == 0xf0 ? 4 : 1;
    n = std::min(n, token.size() - i);
    out.emplace_back(token.substr(i, n));
    i += n;
  }
  return out;
}

CharCnn::CharCnn(nn::ParameterSet& params, const std::string& name, Vocabulary chars, int char_dim, int filters,
                 int kernel_width, nn::Rng& rng)
    : vocab_(std::move(chars)), kernel_(kernel_width) {
  if (char_dim <= 0 || filters <= 0 || kernel_width <= 0)
    fail(ErrorKind::kInvalidArgument, "char CNN sizes must be positive");
  vocab_.add(kPad);
  chars_table_ = &params.uniform(name + ".chars", static_cast<Eigen::Index>(vocab_.size()), char_dim, 0.1, rng);
  filters_ = &params.glorot(name + ".filters", static_cast<Eigen::Index>(kernel_width) * char_dim, filters, rng);
  bias_ = &params.zeros(name + ".bias", 1, filters);
}

Vocabulary CharCnn::build_vocab(std::span<const std::vector<std::string>> sentences) {
  Vocabulary v;
  for (const auto& s : sentences)
    for (const auto& tok : s)
      for (const auto& ch : utf8_chars(tok)) v.add(ch);
  return v;
}

std::vector<int> CharCnn::padded_ids(std::string_view token) const {
  const int pad = vocab_.id(kPad);
  const auto chars = utf8_chars(token);
  const int side = kernel_ / 2;
  std::vector<int> ids(static_cast<std::size_t>(side), pad);
  for (const auto& c : chars) ids.push_back(vocab_.id(c));
  ids.insert(ids.end(), static_cast<std::size_t>(side), pad);
  while (ids.size() < static_cast<std::size_t>(kernel_)) ids.push_back(pad);
  return ids;
}

nn::Var CharCnn::embed(nn::Graph& g, std::span<const std::string> tokens) const {
  if (tokens.empty()) return g.constant(Matrix::Zero(0, dim()));
  nn::Var filters = g.param(*filters_);
  nn::Var bias = g.param(*bias_);
  std::vector<nn::Var> rows;
  rows.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const auto ids = padded_ids(tok);
    nn::Var chars = g.lookup(*chars_table_, ids);
    const auto positions = static_cast<Eigen::Index>(ids.size()) - kernel_ + 1;
    std::vector<nn::Var> windows;
    windows.reserve(static_cast<std::size_t>(kernel_));
    for (int o = 0; o < kernel_; ++o) windows.push_back(nn::slice_rows(chars, o, positions));
    nn::Var conv = nn::relu(nn::add_bias(nn::matmul(nn::hcat(windows), filters), bias));
    rows.push_back(nn::max_rows(conv));
  }
  return nn::vcat(rows);
}

// ---------------------------------------------------------------------------
// TokenEncoder

TokenEncoder::TokenEncoder(nn::ParameterSet& params, const std::string& name, const EmbeddingConfig& config,
                           Vocabulary words, std::optional<Vocabulary> chars, std::vector<std::string> tag_labels,
                           nn::Rng& rng)
    : config_(config) {
  if (config_.use_word) {
    words_.emplace(params, name + ".word", std::move(words), config_.word_dim, rng);
    if (!config_.word_vectors.empty()) words_->load_pretrained(config_.word_vectors);
    base_width_ += words_->dim();
  }
  if (config_.use_char_cnn) {
    if (!chars) fail(ErrorKind::kConfig, "char CNN enabled without a character vocabulary");
    chars_.emplace(params, name + ".char", std::move(*chars), config_.char_dim, config_.char_filters,
                   config_.char_kernel, rng);
    base_width_ += chars_->dim();
  }
  if (config_.use_contextual) {
    contextual_ = make_contextual(config_.contextual);
    base_width_ += contextual_->dim();
  }
  if (base_width_ == 0) fail(ErrorKind::kConfig, "token encoder has no enabled channel");
  if (!tag_labels.empty()) tags_.emplace(params, name + ".tag", std::move(tag_labels), config_.tag_dim, rng);
  if (config_.use_tags && !tags_) fail(ErrorKind::kConfig, "tag channel enabled without a tag vocabulary");
}

nn::Var TokenEncoder::encode_base(nn::Graph& g, std::span<const std::string> tokens) const {
  std::vector<nn::Var> parts;
  if (words_) parts.push_back(words_->embed(g, tokens));
  if (chars_) parts.push_back(chars_->embed(g, tokens));
  if (contextual_) parts.push_back(g.constant(contextual_->embed(tokens)));
  return parts.size() == 1 ? parts.front() : nn::hcat(parts);
}

nn::Var TokenEncoder::encode(nn::Graph& g, std::span<const std::string> tokens,
                             std::span<const std::string> tags) const {
  nn::Var base = encode_base(g, tokens);
  if (!uses_tags()) return base;
  if (tags.size() != tokens.size())
    fail(ErrorKind::kDimension, "encode: " + std::to_string(tags.size()) + " tags for " +
                                    std::to_string(tokens.size()) + " tokens");
  return fuse(base, tags_->embed(g, tags));
}

}  // namespace srlfuse
