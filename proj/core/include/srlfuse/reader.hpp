#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srlfuse/embedding.hpp"
#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/nn/layers.hpp"
#include "srlfuse/nn/parameters.hpp"
#include "srlfuse/tokenizer.hpp"
#include "srlfuse/training.hpp"

namespace srlfuse {

struct ReadingExample {
  std::string id;
  std::string context;                // raw document text
  std::vector<TextToken> document;    // tokens with byte offsets into context
  std::vector<std::string> question;
  int answer_start = 0;               // token indices into document, inclusive
  int answer_end = 0;
  std::vector<std::string> answers;   // all gold answer texts; answers[0] is the aligned one
  std::vector<std::string> document_tags;
  std::vector<std::string> question_tags;

  std::vector<std::string> document_words() const;
  // Context substring covered by document tokens [start, end].
  std::string span_text(int start, int end) const;
};

// Builds an example from whitespace-separated text (tests and fixtures).
ReadingExample make_reading_example(std::string id, std::string_view context, std::string_view question,
                                    int answer_start, int answer_end);
void validate_reading_examples(std::span<const ReadingExample> examples);

struct SpanDistribution {
  Eigen::VectorXd start;
  Eigen::VectorXd end;
};

// argmax of start[i] * end[j] over i <= j <= i + max_len - 1, ties to the
// smallest i then the smallest j.
std::pair<int, int> extract_span(const Eigen::VectorXd& start, const Eigen::VectorXd& end, int max_len);

struct ReaderConfig {
  int hidden = 16;
  int max_answer_length = 17;
  double dropout = 0.0;
  EmbeddingConfig embedding = [] {
    EmbeddingConfig e;
    e.use_char_cnn = true;
    return e;
  }();
};

class ReaderModel {
 public:
  ReaderModel(ReaderConfig config, Vocabulary words, std::optional<Vocabulary> chars,
              std::vector<std::string> tag_labels, std::uint64_t seed);

  // Start and end log-probabilities over the document, each 1 x |D|.
  std::pair<nn::Var, nn::Var> forward_fused(nn::Graph& g, nn::Var document, nn::Var question,
                                            nn::Rng* dropout_rng = nullptr) const;
  std::pair<nn::Var, nn::Var> forward(nn::Graph& g, const ReadingExample& ex, nn::Rng* dropout_rng = nullptr) const;
  nn::Var loss(nn::Graph& g, const ReadingExample& ex, nn::Rng* dropout_rng = nullptr) const;

  SpanDistribution distributions(const ReadingExample& ex) const;
  SpanDistribution distributions_fused(const nn::Matrix& document, const nn::Matrix& question) const;
  std::pair<int, int> predict_span(const ReadingExample& ex) const;
  std::string predict_text(const ReadingExample& ex) const;

  int input_width() const { return encoder_.width(); }
  const TokenEncoder& token_encoder() const { return encoder_; }
  const ReaderConfig& config() const { return config_; }
  nn::ParameterSet& params() { return *params_; }
  const nn::ParameterSet& params() const { return *params_; }

 private:
  struct Trilinear {
    nn::Parameter* left = nullptr;
    nn::Parameter* right = nullptr;
    nn::Parameter* product = nullptr;
  };
  Trilinear make_trilinear(const std::string& name, Eigen::Index width, nn::Rng& rng);
  nn::Var similarity(nn::Graph& g, const Trilinear& w, nn::Var c, nn::Var q) const;

  ReaderConfig config_;
  std::unique_ptr<nn::ParameterSet> params_;
  TokenEncoder encoder_;
  nn::BiGru encoder_gru_;
  Trilinear attention_;
  nn::Linear attention_out_;
  nn::BiGru self_gru_;
  Trilinear self_attention_;
  nn::Linear self_out_;
  nn::BiGru end_gru_;
  nn::Linear start_head_;
  nn::Linear end_head_;
};

struct ReadingScores {
  double exact_match = 0.0;
  double f1 = 0.0;
  std::size_t count = 0;
};

TrainStats train_reader(ReaderModel& model, std::span<const ReadingExample> data, const TrainSchedule& schedule,
                        const EpochCallback& on_epoch = {});
ReadingScores evaluate_reader(const ReaderModel& model, std::span<const ReadingExample> data);

}  // namespace srlfuse
