#include "srlfuse/srl.hpp"

#include <sstream>

#include "json_util.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/hashing.hpp"
#include "train_loop.hpp"

namespace srlfuse {

namespace {

constexpr const char* kCheckpointFormat = "srlfuse-srl-checkpoint";
constexpr int kCheckpointVersion = 1;

detail::json config_to_json(const SrlConfig& c) {
  return {{"layers", c.layers},         {"hidden", c.hidden},         {"predicate_dim", c.predicate_dim},
          {"dropout", c.dropout},       {"carry_bias", c.carry_bias}, {"contextual", detail::contextual_to_json(c.contextual)}};
}

SrlConfig config_from_json(const detail::json& j) {
  SrlConfig c;
  c.layers = j.at("layers").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.predicate_dim = j.at("predicate_dim").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.carry_bias = j.at("carry_bias").get<double>();
  c.contextual = detail::contextual_from_json(j.at("contextual"));
  return c;
}

}  // namespace

SrlConfig SrlConfig::desk() { return {}; }

SrlConfig SrlConfig::full_scale() {
  SrlConfig c;
  c.layers = 8;
  c.hidden = 300;
  c.predicate_dim = 100;
  c.contextual.dim = 512;
  return c;
}

SrlModel::SrlModel(SrlConfig config, TagAlphabet alphabet, std::uint64_t seed)
    : config_(std::move(config)),
      alphabet_(std::move(alphabet)),
      params_(std::make_unique<nn::ParameterSet>()),
      mask_(transition_mask(alphabet_)),
      start_(start_mask(alphabet_)) {
  if (config_.layers < 1) fail(ErrorKind::kConfig, "SRL model needs at least one layer");
  if (config_.hidden < 1) fail(ErrorKind::kConfig, "SRL hidden width must be positive");
  if (alphabet_.roles().empty()) fail(ErrorKind::kConfig, "SRL alphabet has no roles");
  nn::Rng rng(seed);
  contextual_ = make_contextual(config_.contextual);
  indicator_.emplace(*params_, "srl.predicate_indicator", config_.predicate_dim, rng);
  Eigen::Index in = contextual_->dim() + config_.predicate_dim;
  auto dir = nn::Direction::kForward;
  for (int k = 0; k < config_.layers; ++k) {
    layers_.emplace_back(*params_, "srl.layer" + std::to_string(k), in, config_.hidden, dir, config_.carry_bias, rng);
    in = config_.hidden;
    dir = nn::opposite(dir);
  }
  output_ = nn::Linear(*params_, "srl.output", config_.hidden, static_cast<Eigen::Index>(alphabet_.size()), rng);
}

std::vector<nn::Direction> SrlModel::layer_directions() const {
  std::vector<nn::Direction> out;
  for (const auto& l : layers_) out.push_back(l.direction());
  return out;
}

nn::Var SrlModel::input(nn::Graph& g, std::span<const std::string> tokens, const PredicateMarking& marking) const {
  if (marking.size() != tokens.size())
    fail(ErrorKind::kDimension, "predicate marking length does not match the sentence");
  return fuse(g.constant(contextual_->embed(tokens)), indicator_->embed(g, marking));
}

nn::Var SrlModel::forward(nn::Graph& g, std::span<const std::string> tokens, const PredicateMarking& marking,
                          nn::Rng* dropout_rng) const {
  if (tokens.empty()) fail(ErrorKind::kInvalidArgument, "cannot tag an empty sentence");
  nn::Var h = input(g, tokens, marking);
  const nn::RecurrentDropout dropout{config_.dropout, dropout_rng};
  for (const auto& layer : layers_) h = layer(h, dropout);
  return nn::log_softmax_rows(output_(h));
}

nn::Var SrlModel::loss(nn::Graph& g, const SrlExample& example, nn::Rng* dropout_rng) const {
  const auto marking = PredicateMarking::single(example.tokens.size(), example.predicate);
  nn::Var logp = forward(g, example.tokens, marking, dropout_rng);
  const auto gold = alphabet_.ids(example.tags);
  return nn::scale(nn::pick_nll(logp, gold), 1.0 / static_cast<double>(gold.size()));
}

EmissionMatrix SrlModel::tag_one_predicate(std::span<const std::string> tokens, const PredicateMarking& predicates,
                                           std::size_t predicate_index) const {
  if (predicates.size() != tokens.size())
    fail(ErrorKind::kDimension, "predicate marking length does not match the sentence");
  if (predicate_index >= predicates.size() || !predicates.flags[predicate_index])
    fail(ErrorKind::kInvalidArgument, "token " + std::to_string(predicate_index) + " is not a marked predicate");
  nn::Graph g(false);
  return forward(g, tokens, PredicateMarking::single(tokens.size(), predicate_index)).value();
}

std::vector<BioTag> SrlModel::predict(std::span<const std::string> tokens, std::size_t predicate_index) const {
  const auto marking = PredicateMarking::single(tokens.size(), predicate_index);
  const auto path = viterbi_decode(tag_one_predicate(tokens, marking, predicate_index), mask_, start_);
  return alphabet_.to_tags(path.tags);
}

std::string SrlModel::config_hash() const {
  const detail::json key = {{"config", config_to_json(config_)}, {"roles", alphabet_.roles()}};
  return sha256_hex(key.dump()).substr(0, 16);
}

void SrlModel::save(const std::string& path) const {
  detail::json j = {{"format", kCheckpointFormat},
                    {"version", kCheckpointVersion},
                    {"config", config_to_json(config_)},
                    {"roles", alphabet_.roles()},
                    {"config_hash", config_hash()},
                    {"parameters", detail::params_to_json(*params_)}};
  detail::write_json_file(path, j);
}

SrlModel SrlModel::load(const std::string& path) {
  const auto j = detail::read_json_file(path);
  detail::check_header(j, kCheckpointFormat, kCheckpointVersion, path);
  try {
    SrlModel model(config_from_json(j.at("config")), TagAlphabet(j.at("roles").get<std::vector<std::string>>()), 0);
    detail::params_from_json(*model.params_, j.at("parameters"));
    if (j.value("config_hash", std::string{}) != model.config_hash())
      fail(ErrorKind::kModel, path + ": config hash does not match its configuration");
    return model;
  } catch (const detail::json::exception& e) {
    fail(ErrorKind::kModel, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

void validate_srl_examples(std::span<const SrlExample> examples, const TagAlphabet& alphabet) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    const std::string where = "SRL example " + std::to_string(i);
    if (ex.tokens.empty()) fail(ErrorKind::kData, where + ": empty sentence");
    if (ex.tags.size() != ex.tokens.size()) fail(ErrorKind::kData, where + ": tag count differs from token count");
    if (ex.predicate >= ex.tokens.size()) fail(ErrorKind::kData, where + ": predicate index outside sentence");
    const auto decoded = decode_spans(ex.tags);
    if (!decoded.valid())
      fail(ErrorKind::kData, where + ": invalid BIO sequence (dangling I at token " +
                                 std::to_string(decoded.repairs.front()) + ")");
    for (const auto& t : ex.tags)
      if (!alphabet.find(t)) fail(ErrorKind::kData, where + ": tag " + t.str() + " outside the alphabet");
  }
}

TrainStats train_srl(SrlModel& model, std::span<const SrlExample> corpus, const TrainSchedule& schedule,
                     const EpochCallback& on_epoch) {
  validate_srl_examples(corpus, model.alphabet());
  return detail::run_training(
      model.params(), corpus.size(), schedule,
      [&](nn::Graph& g, std::size_t i, nn::Rng& rng) { return model.loss(g, corpus[i], &rng); }, on_epoch);
}

std::vector<std::vector<BioTag>> predict_srl(const SrlModel& model, std::span<const SrlExample> corpus) {
  std::vector<std::vector<BioTag>> out;
  out.reserve(corpus.size());
  for (const auto& ex : corpus) out.push_back(model.predict(ex.tokens, ex.predicate));
  return out;
}

// ---------------------------------------------------------------------------

std::string AnnotatedSentence::provenance() const {
  return selected ? "predicate:" + std::to_string(*selected) : "no-predicate";
}

std::vector<std::string> AnnotatedSentence::words() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::size_t count_labeled(std::span<const BioTag> tags) {
  std::size_t n = 0;
  for (const auto& t : tags) n += t.is_outside() ? 0 : 1;
  return n;
}

std::optional<std::size_t> select_most_labeled(std::span<const PredicateRun> runs) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (!best || runs[i].labeled > runs[*best].labeled) best = i;
  return best;
}

AnnotatedSentence annotate(std::span<const Token> tokens, const SrlModel& model, const PosProvider& pos) {
  AnnotatedSentence out;
  out.tokens.assign(tokens.begin(), tokens.end());
  out.predicates = identify_predicates(tokens, pos);
  const auto words = out.words();
  for (std::size_t p : out.predicates.indices()) {
    const auto emissions = model.tag_one_predicate(words, out.predicates, p);
    const auto path = viterbi_decode(emissions, model.transition_constraints(), model.start_constraints());
    PredicateRun run;
    run.predicate = p;
    run.labels = model.alphabet().to_tags(path.tags);
    run.labeled = count_labeled(run.labels);
    run.score = path.score;
    out.runs.push_back(std::move(run));
  }
  if (auto best = select_most_labeled(out.runs)) {
    out.selected = out.runs[*best].predicate;
    out.labels = out.runs[*best].labels;
  } else {
    out.labels.assign(tokens.size(), BioTag::outside());
  }
  return out;
}

AnnotatedSentence annotate(std::span<const std::string> words, const SrlModel& model, const PosProvider& pos) {
  const auto tokens = make_tokens(words);
  return annotate(std::span<const Token>(tokens), model, pos);
}

}  // namespace srlfuse
