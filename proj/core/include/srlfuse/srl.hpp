#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srlfuse/bio.hpp"
#include "srlfuse/decoding.hpp"
#include "srlfuse/embedding.hpp"
#include "srlfuse/nn/layers.hpp"
#include "srlfuse/predicate.hpp"
#include "srlfuse/training.hpp"

namespace srlfuse {

struct SrlConfig {
  int layers = 2;
  int hidden = 64;
  int predicate_dim = 10;
  double dropout = 0.1;
  double carry_bias = 1.0;
  ContextualSpec contextual;

  // 2 layers, width 64, hash contextual vectors of width 64.
  static SrlConfig desk();
  // 8 interleaved layers over 512-wide contextual vectors.
  static SrlConfig full_scale();
};

// One training or evaluation instance: a sentence with exactly one marked
// predicate and the gold BIO sequence for that predicate.
struct SrlExample {
  std::vector<std::string> tokens;
  std::size_t predicate = 0;
  std::vector<BioTag> tags;
};

// Deep interleaved highway-LSTM tagger. Each layer runs in the direction
// opposite to the one below it; the input is contextual vectors concatenated
// with a predicate indicator embedding, the output a per-token log-softmax
// over the tag alphabet.
class SrlModel {
 public:
  SrlModel(SrlConfig config, TagAlphabet alphabet, std::uint64_t seed);

  const SrlConfig& config() const noexcept { return config_; }
  const TagAlphabet& alphabet() const noexcept { return alphabet_; }
  nn::ParameterSet& params() noexcept { return *params_; }
  const nn::ParameterSet& params() const noexcept { return *params_; }
  std::vector<nn::Direction> layer_directions() const;
  const std::vector<nn::HighwayLstm>& layers() const noexcept { return layers_; }

  // Encoder input e = contextual ++ predicate indicator, n x (d_l + d_p).
  nn::Var input(nn::Graph& g, std::span<const std::string> tokens, const PredicateMarking& marking) const;
  // Per-token log-probabilities, n x |tags|.
  nn::Var forward(nn::Graph& g, std::span<const std::string> tokens, const PredicateMarking& marking,
                  nn::Rng* dropout_rng = nullptr) const;
  // Mean per-token negative log-likelihood of the gold tags.
  nn::Var loss(nn::Graph& g, const SrlExample& example, nn::Rng* dropout_rng = nullptr) const;

  // Emissions for a single predicate run. Throws Error(kInvalidArgument) if
  // `predicate_index` is not flagged in `predicates`.
  EmissionMatrix tag_one_predicate(std::span<const std::string> tokens, const PredicateMarking& predicates,
                                   std::size_t predicate_index) const;
  // Constrained Viterbi decode of one predicate run.
  std::vector<BioTag> predict(std::span<const std::string> tokens, std::size_t predicate_index) const;

  const BoolMatrix& transition_constraints() const noexcept { return mask_; }
  const BoolVector& start_constraints() const noexcept { return start_; }

  std::string config_hash() const;
  void save(const std::string& path) const;
  static SrlModel load(const std::string& path);

 private:
  SrlConfig config_;
  TagAlphabet alphabet_;
  std::unique_ptr<nn::ParameterSet> params_;
  std::shared_ptr<const ContextualEmbedder> contextual_;
  std::optional<PredicateIndicatorEmbedding> indicator_;
  std::vector<nn::HighwayLstm> layers_;
  nn::Linear output_;
  BoolMatrix mask_;
  BoolVector start_;
};

// Rejects invalid gold sequences, tags outside the alphabet and bad predicate
// indices, naming the offending example index.
void validate_srl_examples(std::span<const SrlExample> examples, const TagAlphabet& alphabet);

// Per-token cross-entropy with Adam. A zero-epoch schedule leaves the model
// untouched.
TrainStats train_srl(SrlModel& model, std::span<const SrlExample> corpus, const TrainSchedule& schedule,
                     const EpochCallback& on_epoch = {});

// Constrained predictions for every example's marked predicate.
std::vector<std::vector<BioTag>> predict_srl(const SrlModel& model, std::span<const SrlExample> corpus);

struct PredicateRun {
  std::size_t predicate = 0;
  std::vector<BioTag> labels;
  std::size_t labeled = 0;  // non-O count
  double score = 0.0;
};

struct AnnotatedSentence {
  std::vector<Token> tokens;
  std::vector<BioTag> labels;
  PredicateMarking predicates;
  std::optional<std::size_t> selected;  // predicate whose run was kept
  std::vector<PredicateRun> runs;

  std::string provenance() const;
  std::vector<std::string> words() const;
};

std::size_t count_labeled(std::span<const BioTag> tags);

// Index into `runs` of the run with the most non-O labels; ties go to the
// earliest run. nullopt for an empty list.
std::optional<std::size_t> select_most_labeled(std::span<const PredicateRun> runs);

// Identifies predicates, runs the tagger once per predicate, decodes each run
// under BIO constraints and keeps the run with the most non-O labels.
// Sentences without predicates get all-O labels.
AnnotatedSentence annotate(std::span<const Token> tokens, const SrlModel& model, const PosProvider& pos);
AnnotatedSentence annotate(std::span<const std::string> words, const SrlModel& model, const PosProvider& pos);

}  // namespace srlfuse
