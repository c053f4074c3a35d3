#include "srlfuse/reader.hpp"

#include "srlfuse/error.hpp"
#include "srlfuse/metrics.hpp"
#include "train_loop.hpp"

namespace srlfuse {

namespace {

// Keeps a position from attending to itself in self-attention.
constexpr double kSelfMask = -1e9;

}  // namespace

std::vector<std::string> ReadingExample::document_words() const {
  std::vector<std::string> out;
  out.reserve(document.size());
  for (const auto& t : document) out.push_back(t.text);
  return out;
}

std::string ReadingExample::span_text(int start, int end) const {
  if (start < 0 || end < start || end >= static_cast<int>(document.size()))
    fail(ErrorKind::kOutOfRange, "span [" + std::to_string(start) + ", " + std::to_string(end) + "] outside document");
  const auto b = document[static_cast<std::size_t>(start)].begin;
  const auto e = document[static_cast<std::size_t>(end)].end;
  return context.substr(b, e - b);
}

ReadingExample make_reading_example(std::string id, std::string_view context, std::string_view question,
                                    int answer_start, int answer_end) {
  ReadingExample ex;
  ex.id = std::move(id);
  ex.context = std::string(context);
  ex.document = tokenize(ex.context);
  ex.question = tokenize_words(question);
  ex.answer_start = answer_start;
  ex.answer_end = answer_end;
  ex.answers.push_back(ex.span_text(answer_start, answer_end));
  return ex;
}

void validate_reading_examples(std::span<const ReadingExample> examples) {
  for (const auto& ex : examples) {
    const int n = static_cast<int>(ex.document.size());
    if (n == 0 || ex.question.empty()) fail(ErrorKind::kData, "reading example " + ex.id + " has empty input");
    if (ex.answer_start < 0 || ex.answer_start > ex.answer_end || ex.answer_end >= n)
      fail(ErrorKind::kData, "reading example " + ex.id + ": answer span outside the document");
    if (ex.answers.empty()) fail(ErrorKind::kData, "reading example " + ex.id + " has no gold answer");
  }
}

std::pair<int, int> extract_span(const Eigen::VectorXd& start, const Eigen::VectorXd& end, int max_len) {
  if (start.size() != end.size() || start.size() == 0)
    fail(ErrorKind::kDimension, "extract_span needs two non-empty distributions of equal length");
  if (max_len < 1) fail(ErrorKind::kInvalidArgument, "max answer length must be positive");
  const Eigen::Index n = start.size();
  std::pair<int, int> best{0, 0};
  double best_score = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index last = std::min<Eigen::Index>(n - 1, i + max_len - 1);
    for (Eigen::Index j = i; j <= last; ++j) {
      const double s = start(i) * end(j);
      if (s > best_score) {
        best_score = s;
        best = {static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  return best;
}

ReaderModel::ReaderModel(ReaderConfig config, Vocabulary words, std::optional<Vocabulary> chars,
                         std::vector<std::string> tag_labels, std::uint64_t seed)
    : config_(std::move(config)),
      params_(std::make_unique<nn::ParameterSet>()),
      encoder_([&]() -> TokenEncoder {
        nn::Rng rng(seed);
        return TokenEncoder(*params_, "reader.embed", config_.embedding, std::move(words), std::move(chars),
                            std::move(tag_labels), rng);
      }()) {
  if (config_.hidden < 1) fail(ErrorKind::kConfig, "reader hidden width must be positive");
  nn::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Eigen::Index h = config_.hidden, w = 2 * h;
  encoder_gru_ = nn::BiGru(*params_, "reader.encoder", encoder_.width(), h, rng);
  attention_ = make_trilinear("reader.attention", w, rng);
  attention_out_ = nn::Linear(*params_, "reader.attention_out", 4 * w, w, rng);
  self_gru_ = nn::BiGru(*params_, "reader.self_encoder", w, h, rng);
  self_attention_ = make_trilinear("reader.self_attention", w, rng);
  self_out_ = nn::Linear(*params_, "reader.self_out", 3 * w, w, rng);
  end_gru_ = nn::BiGru(*params_, "reader.end_encoder", w, h, rng);
  start_head_ = nn::Linear(*params_, "reader.start", w, 1, rng);
  end_head_ = nn::Linear(*params_, "reader.end", 2 * w, 1, rng);
}

ReaderModel::Trilinear ReaderModel::make_trilinear(const std::string& name, Eigen::Index width, nn::Rng& rng) {
  Trilinear t;
  t.left = &params_->glorot(name + ".left", width, 1, rng);
  t.right = &params_->glorot(name + ".right", width, 1, rng);
  t.product = &params_->glorot(name + ".product", 1, width, rng);
  return t;
}

// S[i][j] = c_i . w1 + q_j . w2 + (c_i * w3) . q_j
nn::Var ReaderModel::similarity(nn::Graph& g, const Trilinear& w, nn::Var c, nn::Var q) const {
  nn::Var s = nn::matmul(nn::cmul_row(c, g.param(*w.product)), nn::transpose(q));
  s = nn::add_bias(s, nn::transpose(nn::matmul(q, g.param(*w.right))));
  return nn::add_col(s, nn::matmul(c, g.param(*w.left)));
}

std::pair<nn::Var, nn::Var> ReaderModel::forward_fused(nn::Graph& g, nn::Var document, nn::Var question,
                                                       nn::Rng* dropout_rng) const {
  const auto width = encoder_.width();
  if (document.cols() != width || question.cols() != width)
    fail(ErrorKind::kDimension, "reader expects inputs of width " + std::to_string(width));
  if (document.rows() == 0 || question.rows() == 0) fail(ErrorKind::kInvalidArgument, "reader input is empty");
  const double p = config_.dropout;
  const Eigen::Index n = document.rows();

  nn::Var c = encoder_gru_(nn::dropout(document, p, dropout_rng));
  nn::Var q = encoder_gru_(nn::dropout(question, p, dropout_rng));

  // Bidirectional attention flow.
  nn::Var s = similarity(g, attention_, c, q);
  nn::Var c2q = nn::matmul(nn::softmax_rows(s), q);
  nn::Var b = nn::softmax_col(nn::max_cols(s));
  nn::Var q2c = nn::repeat_rows(nn::matmul(nn::transpose(b), c), n);
  nn::Var x = nn::relu(attention_out_(nn::hcat({c, c2q, nn::cmul(c, c2q), nn::cmul(c, q2c)})));

  // Residual self-attention.
  nn::Var y = self_gru_(nn::dropout(x, p, dropout_rng));
  nn::Matrix diag = nn::Matrix::Zero(n, n);
  diag.diagonal().setConstant(kSelfMask);
  nn::Var self_sim = nn::add_const(similarity(g, self_attention_, y, y), diag);
  nn::Var att = nn::matmul(nn::softmax_rows(self_sim), y);
  nn::Var m = nn::add(x, nn::relu(self_out_(nn::hcat({y, att, nn::cmul(y, att)}))));

  nn::Var start = nn::transpose(start_head_(m));
  nn::Var end = nn::transpose(end_head_(nn::hcat({m, end_gru_(m)})));
  return {nn::log_softmax_rows(start), nn::log_softmax_rows(end)};
}

std::pair<nn::Var, nn::Var> ReaderModel::forward(nn::Graph& g, const ReadingExample& ex,
                                                 nn::Rng* dropout_rng) const {
  const auto words = ex.document_words();
  if (words.empty() || ex.question.empty()) fail(ErrorKind::kInvalidArgument, "reader input is empty");
  return forward_fused(g, encoder_.encode(g, words, ex.document_tags),
                       encoder_.encode(g, ex.question, ex.question_tags), dropout_rng);
}

nn::Var ReaderModel::loss(nn::Graph& g, const ReadingExample& ex, nn::Rng* dropout_rng) const {
  auto [start, end] = forward(g, ex, dropout_rng);
  const int s[] = {ex.answer_start};
  const int e[] = {ex.answer_end};
  return nn::add(nn::pick_nll(start, s), nn::pick_nll(end, e));
}

SpanDistribution ReaderModel::distributions(const ReadingExample& ex) const {
  nn::Graph g(false);
  auto [start, end] = forward(g, ex);
  return {start.value().row(0).array().exp().transpose(), end.value().row(0).array().exp().transpose()};
}

SpanDistribution ReaderModel::distributions_fused(const nn::Matrix& document, const nn::Matrix& question) const {
  nn::Graph g(false);
  auto [start, end] = forward_fused(g, g.constant(document), g.constant(question));
  return {start.value().row(0).array().exp().transpose(), end.value().row(0).array().exp().transpose()};
}

std::pair<int, int> ReaderModel::predict_span(const ReadingExample& ex) const {
  const auto d = distributions(ex);
  return extract_span(d.start, d.end, config_.max_answer_length);
}

std::string ReaderModel::predict_text(const ReadingExample& ex) const {
  const auto [s, e] = predict_span(ex);
  return ex.span_text(s, e);
}

TrainStats train_reader(ReaderModel& model, std::span<const ReadingExample> data, const TrainSchedule& schedule,
                        const EpochCallback& on_epoch) {
  if (data.empty()) fail(ErrorKind::kInvalidArgument, "reading training set is empty");
  validate_reading_examples(data);
  return detail::run_training(
      model.params(), data.size(), schedule,
      [&](nn::Graph& g, std::size_t i, nn::Rng& rng) { return model.loss(g, data[i], &rng); }, on_epoch);
}

ReadingScores evaluate_reader(const ReaderModel& model, std::span<const ReadingExample> data) {
  if (data.empty()) fail(ErrorKind::kInvalidArgument, "cannot evaluate on zero reading examples");
  ReadingScores scores;
  for (const auto& ex : data) {
    const auto text = model.predict_text(ex);
    scores.exact_match += exact_match(text, ex.answers);
    scores.f1 += token_f1(text, ex.answers);
  }
  scores.count = data.size();
  scores.exact_match /= static_cast<double>(data.size());
  scores.f1 /= static_cast<double>(data.size());
  return scores;
}

}  // namespace srlfuse
