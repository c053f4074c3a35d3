#include "srlfuse/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "srlfuse/error.hpp"

namespace srlfuse {

double MetricReport::mean() const {
  if (per_seed.empty()) return value;
  return std::accumulate(per_seed.begin(), per_seed.end(), 0.0) / static_cast<double>(per_seed.size());
}

MetricReport aggregate(std::string name, std::span<const double> per_seed, std::size_t count) {
  if (per_seed.empty()) fail(ErrorKind::kInvalidArgument, "cannot aggregate " + name + " over zero seeds");
  MetricReport r;
  r.name = std::move(name);
  r.count = count;
  r.per_seed.assign(per_seed.begin(), per_seed.end());
  r.value = r.mean();
  return r;
}

std::vector<std::string> answer_tokens(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  }
  std::vector<std::string> out;
  std::istringstream in(cleaned);
  std::string word;
  while (in >> word)
    if (word != "a" && word != "an" && word != "the") out.push_back(word);
  return out;
}

std::string normalize_answer(std::string_view text) {
  std::string out;
  for (const auto& w : answer_tokens(text)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

namespace {

void require_golds(std::span<const std::string> golds) {
  if (golds.empty()) fail(ErrorKind::kInvalidArgument, "at least one gold answer is required");
}

double pair_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
  std::map<std::string, int> counts;
  for (const auto& g : gold) ++counts[g];
  int common = 0;
  for (const auto& p : pred) {
    auto it = counts.find(p);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(pred.size());
  const double r = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * p * r / (p + r);
}

}  // namespace

double exact_match(std::string_view prediction, std::span<const std::string> golds) {
  require_golds(golds);
  const auto p = normalize_answer(prediction);
  for (const auto& g : golds)
    if (normalize_answer(g) == p) return 1.0;
  return 0.0;
}

double token_f1(std::string_view prediction, std::span<const std::string> golds) {
  require_golds(golds);
  const auto p = answer_tokens(prediction);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, pair_f1(p, answer_tokens(g)));
  return best;
}

SpanScores span_scores(std::size_t correct, std::size_t predicted, std::size_t gold) {
  SpanScores s{correct, predicted, gold, 0.0, 0.0, 0.0};
  if (predicted == 0 && gold == 0) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  if (predicted > 0) s.precision = static_cast<double>(correct) / static_cast<double>(predicted);
  if (gold > 0) s.recall = static_cast<double>(correct) / static_cast<double>(gold);
  if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

SpanScores srl_span_f1(const std::vector<std::vector<BioTag>>& predicted,
                       const std::vector<std::vector<BioTag>>& gold) {
  if (predicted.size() != gold.size())
    fail(ErrorKind::kDimension, "span F1: " + std::to_string(predicted.size()) + " predicted sentences vs " +
                                    std::to_string(gold.size()) + " gold");
  std::size_t correct = 0, n_pred = 0, n_gold = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predicted[i].size() != gold[i].size())
      fail(ErrorKind::kDimension, "span F1: sentence " + std::to_string(i) + " has mismatched lengths");
    auto ps = decode_spans(predicted[i]).spans;
    auto gs = decode_spans(gold[i]).spans;
    n_pred += ps.size();
    n_gold += gs.size();
    for (const auto& s : ps)
      if (std::find(gs.begin(), gs.end(), s) != gs.end()) ++correct;
  }
  return span_scores(correct, n_pred, n_gold);
}

double accuracy(std::span<const int> predictions, std::span<const int> golds) {
  if (predictions.size() != golds.size())
    fail(ErrorKind::kDimension, "accuracy: " + std::to_string(predictions.size()) + " predictions vs " +
                                    std::to_string(golds.size()) + " golds");
  if (golds.empty()) fail(ErrorKind::kInvalidArgument, "accuracy of zero examples is undefined");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) hit += predictions[i] == golds[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(golds.size());
}

}  // namespace srlfuse
