#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlfuse/bio.hpp"

namespace srlfuse {

// A metric value in [0, 1]. When aggregated over seeds, `per_seed` holds the
// individual values and `value` their arithmetic mean.
struct MetricReport {
  std::string name;
  double value = 0.0;
  std::size_t count = 0;
  std::vector<double> per_seed;

  double percent() const { return 100.0 * value; }
  double mean() const;
};

MetricReport aggregate(std::string name, std::span<const double> per_seed, std::size_t count);

// SQuAD-evaluator normalisation: lowercase, drop ASCII punctuation, drop the
// articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);
std::vector<std::string> answer_tokens(std::string_view text);

double exact_match(std::string_view prediction, std::span<const std::string> golds);
double token_f1(std::string_view prediction, std::span<const std::string> golds);

struct SpanScores {
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro-averaged labelled span scores. A predicted span is correct when role,
// start and end all match a gold span of the same sentence.
SpanScores srl_span_f1(const std::vector<std::vector<BioTag>>& predicted,
                       const std::vector<std::vector<BioTag>>& gold);
SpanScores span_scores(std::size_t correct, std::size_t predicted, std::size_t gold);

double accuracy(std::span<const int> predictions, std::span<const int> golds);

}  // namespace srlfuse
