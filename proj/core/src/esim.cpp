#include "srlfuse/esim.hpp"

#include "srlfuse/error.hpp"
#include "srlfuse/metrics.hpp"
#include "train_loop.hpp"

namespace srlfuse {

const char* to_string(NliLabel label) {
  switch (label) {
    case NliLabel::kEntailment: return "entailment";
    case NliLabel::kContradiction: return "contradiction";
    case NliLabel::kNeutral: return "neutral";
  }
  return "?";
}

std::optional<NliLabel> parse_nli_label(std::string_view text) {
  if (text == "entailment") return NliLabel::kEntailment;
  if (text == "contradiction") return NliLabel::kContradiction;
  if (text == "neutral") return NliLabel::kNeutral;
  return std::nullopt;
}

std::array<std::string, kNliClasses> nli_label_names() { return {"entailment", "contradiction", "neutral"}; }

void validate_entailment_examples(std::span<const EntailmentExample> examples) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (ex.premise.empty() || ex.hypothesis.empty())
      fail(ErrorKind::kData, "entailment example " + std::to_string(i) + " has an empty side");
  }
}

EsimModel::EsimModel(EsimConfig config, Vocabulary words, std::optional<Vocabulary> chars,
                     std::vector<std::string> tag_labels, std::uint64_t seed)
    : config_(std::move(config)),
      params_(std::make_unique<nn::ParameterSet>()),
      encoder_([&]() -> TokenEncoder {
        nn::Rng rng(seed);
        return TokenEncoder(*params_, "esim.embed", config_.embedding, std::move(words), std::move(chars),
                            std::move(tag_labels), rng);
      }()) {
  nn::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int h = config_.hidden;
  input_lstm_ = nn::BiLstm(*params_, "esim.input", encoder_.width(), h, rng);
  projection_ = nn::Linear(*params_, "esim.projection", 8 * h, config_.projection, rng);
  composition_lstm_ = nn::BiLstm(*params_, "esim.composition", config_.projection, h, rng);
  hidden_ = nn::Linear(*params_, "esim.hidden", 8 * h, config_.classifier, rng);
  output_ = nn::Linear(*params_, "esim.output", config_.classifier, kNliClasses, rng);
}

nn::Var EsimModel::forward_fused(nn::Graph& g, nn::Var premise, nn::Var hypothesis, EsimTrace* trace,
                                 nn::Rng* dropout_rng) const {
  (void)g;
  const auto width = encoder_.width();
  if (premise.cols() != width || hypothesis.cols() != width)
    fail(ErrorKind::kDimension, "ESIM expects inputs of width " + std::to_string(width) + ", got " +
                                    std::to_string(premise.cols()) + " and " + std::to_string(hypothesis.cols()));
  if (premise.rows() == 0 || hypothesis.rows() == 0) fail(ErrorKind::kInvalidArgument, "ESIM input side is empty");
  const double p = config_.dropout;
  nn::Var a = input_lstm_(nn::dropout(premise, p, dropout_rng));
  nn::Var b = input_lstm_(nn::dropout(hypothesis, p, dropout_rng));

  nn::Var e = nn::matmul(a, nn::transpose(b));
  nn::Var wa = nn::softmax_rows(e);
  nn::Var wb = nn::softmax_rows(nn::transpose(e));
  if (trace) {
    trace->premise_attention = wa.value();
    trace->hypothesis_attention = wb.value();
  }
  nn::Var a_tilde = nn::matmul(wa, b);
  nn::Var b_tilde = nn::matmul(wb, a);

  auto compose = [&](nn::Var x, nn::Var x_tilde) {
    nn::Var m = nn::hcat({x, x_tilde, nn::sub(x, x_tilde), nn::cmul(x, x_tilde)});
    nn::Var proj = nn::relu(projection_(m));
    nn::Var v = composition_lstm_(nn::dropout(proj, p, dropout_rng));
    return nn::hcat({nn::mean_rows(v), nn::max_rows(v)});
  };
  nn::Var pooled = nn::hcat({compose(a, a_tilde), compose(b, b_tilde)});
  nn::Var hidden = nn::tanh(hidden_(nn::dropout(pooled, p, dropout_rng)));
  return output_(hidden);
}

nn::Var EsimModel::logits(nn::Graph& g, const EntailmentExample& ex, nn::Rng* dropout_rng) const {
  if (ex.premise.empty() || ex.hypothesis.empty()) fail(ErrorKind::kInvalidArgument, "ESIM input side is empty");
  return forward_fused(g, encoder_.encode(g, ex.premise, ex.premise_tags),
                       encoder_.encode(g, ex.hypothesis, ex.hypothesis_tags), nullptr, dropout_rng);
}

nn::Var EsimModel::loss(nn::Graph& g, const EntailmentExample& ex, nn::Rng* dropout_rng) const {
  const int target[] = {static_cast<int>(ex.label)};
  return nn::pick_nll(nn::log_softmax_rows(logits(g, ex, dropout_rng)), target);
}

Eigen::RowVector3d EsimModel::probabilities(const EntailmentExample& ex) const {
  nn::Graph g(false);
  return nn::softmax_rows(logits(g, ex)).value();
}

Eigen::RowVector3d EsimModel::probabilities_fused(const nn::Matrix& premise, const nn::Matrix& hypothesis,
                                                  EsimTrace* trace) const {
  nn::Graph g(false);
  return nn::softmax_rows(forward_fused(g, g.constant(premise), g.constant(hypothesis), trace)).value();
}

NliLabel EsimModel::predict(const EntailmentExample& ex) const {
  const auto probs = probabilities(ex);
  int best = 0;
  for (int k = 1; k < kNliClasses; ++k)
    if (probs(k) > probs(best)) best = k;
  return static_cast<NliLabel>(best);
}

TrainStats train_entailment(EsimModel& model, std::span<const EntailmentExample> data, const TrainSchedule& schedule,
                            const EpochCallback& on_epoch) {
  if (data.empty()) fail(ErrorKind::kInvalidArgument, "entailment training set is empty");
  validate_entailment_examples(data);
  return detail::run_training(
      model.params(), data.size(), schedule,
      [&](nn::Graph& g, std::size_t i, nn::Rng& rng) { return model.loss(g, data[i], &rng); }, on_epoch);
}

std::vector<NliLabel> predict_entailment(const EsimModel& model, std::span<const EntailmentExample> data) {
  std::vector<NliLabel> out;
  out.reserve(data.size());
  for (const auto& ex : data) out.push_back(model.predict(ex));
  return out;
}

double entailment_accuracy(const EsimModel& model, std::span<const EntailmentExample> data) {
  std::vector<int> pred, gold;
  for (const auto& ex : data) {
    pred.push_back(static_cast<int>(model.predict(ex)));
    gold.push_back(static_cast<int>(ex.label));
  }
  return accuracy(pred, gold);
}

}  // namespace srlfuse
