#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srlfuse/embedding.hpp"
#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/nn/layers.hpp"
#include "srlfuse/nn/parameters.hpp"
#include "srlfuse/training.hpp"

namespace srlfuse {

// Serialised class order is fixed: entailment, contradiction, neutral.
enum class NliLabel { kEntailment = 0, kContradiction = 1, kNeutral = 2 };
inline constexpr int kNliClasses = 3;

const char* to_string(NliLabel label);
std::optional<NliLabel> parse_nli_label(std::string_view text);
std::array<std::string, kNliClasses> nli_label_names();

struct EntailmentExample {
  std::vector<std::string> premise;
  std::vector<std::string> hypothesis;
  NliLabel label = NliLabel::kNeutral;
  // Per-token tag labels (SRL/POS/NE); only read when the tag channel is on.
  std::vector<std::string> premise_tags;
  std::vector<std::string> hypothesis_tags;
};

void validate_entailment_examples(std::span<const EntailmentExample> examples);

struct EsimConfig {
  int hidden = 24;
  int projection = 24;
  int classifier = 24;
  double dropout = 0.0;
  EmbeddingConfig embedding;
};

struct EsimTrace {
  nn::Matrix premise_attention;     // |p| x |h|, rows sum to 1
  nn::Matrix hypothesis_attention;  // |h| x |p|, rows sum to 1
};

class EsimModel {
 public:
  EsimModel(EsimConfig config, Vocabulary words, std::optional<Vocabulary> chars, std::vector<std::string> tag_labels,
            std::uint64_t seed);

  // Core network on already fused sequences; returns 1 x 3 logits.
  nn::Var forward_fused(nn::Graph& g, nn::Var premise, nn::Var hypothesis, EsimTrace* trace = nullptr,
                        nn::Rng* dropout_rng = nullptr) const;
  nn::Var logits(nn::Graph& g, const EntailmentExample& ex, nn::Rng* dropout_rng = nullptr) const;
  nn::Var loss(nn::Graph& g, const EntailmentExample& ex, nn::Rng* dropout_rng = nullptr) const;

  Eigen::RowVector3d probabilities(const EntailmentExample& ex) const;
  Eigen::RowVector3d probabilities_fused(const nn::Matrix& premise, const nn::Matrix& hypothesis,
                                         EsimTrace* trace = nullptr) const;
  NliLabel predict(const EntailmentExample& ex) const;

  int input_width() const { return encoder_.width(); }
  const TokenEncoder& token_encoder() const { return encoder_; }
  const EsimConfig& config() const { return config_; }
  nn::ParameterSet& params() { return *params_; }
  const nn::ParameterSet& params() const { return *params_; }

 private:
  EsimConfig config_;
  std::unique_ptr<nn::ParameterSet> params_;
  TokenEncoder encoder_;
  nn::BiLstm input_lstm_;
  nn::Linear projection_;
  nn::BiLstm composition_lstm_;
  nn::Linear hidden_;
  nn::Linear output_;
};

TrainStats train_entailment(EsimModel& model, std::span<const EntailmentExample> data, const TrainSchedule& schedule,
                            const EpochCallback& on_epoch = {});
std::vector<NliLabel> predict_entailment(const EsimModel& model, std::span<const EntailmentExample> data);
double entailment_accuracy(const EsimModel& model, std::span<const EntailmentExample> data);

}  // namespace srlfuse
