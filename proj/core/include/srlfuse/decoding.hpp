#pragma once

#include <vector>

#include <Eigen/Core>

#include "srlfuse/bio.hpp"

namespace srlfuse {

// Per-token, per-tag log-potentials: rows are tokens, columns are tag ids.
using EmissionMatrix = Eigen::MatrixXd;

struct DecodePath {
  std::vector<int> tags;
  double score = 0.0;
};

// Maximum-score path under hard transition constraints (allowed transitions
// contribute 0, forbidden ones -inf). Among equal-score paths the one with
// the lowest tag id at the latest differing position wins.
DecodePath viterbi_decode(const EmissionMatrix& emissions, const BoolMatrix& mask,
                          const BoolVector& start);

// Per-token argmax (lowest id on ties). May violate BIO validity.
DecodePath greedy_decode(const EmissionMatrix& emissions);

// Sum of emissions along a path.
double path_score(const EmissionMatrix& emissions, const std::vector<int>& path);

}  // namespace srlfuse
