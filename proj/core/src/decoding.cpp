#include "srlfuse/decoding.hpp"

#include <limits>
#include <string>

#include "srlfuse/error.hpp"

namespace srlfuse {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_finite(const EmissionMatrix& emissions) {
  if (!emissions.allFinite()) fail(ErrorKind::kInvalidArgument, "emission matrix has non-finite entries");
}

}  // namespace

DecodePath viterbi_decode(const EmissionMatrix& emissions, const BoolMatrix& mask,
                          const BoolVector& start) {
  const Eigen::Index len = emissions.rows();
  const Eigen::Index n = emissions.cols();
  if (mask.rows() != n || mask.cols() != n || start.size() != n) {
    fail(ErrorKind::kDimension, "emission width " + std::to_string(n) + " does not match mask " +
                                    std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) +
                                    " / start " + std::to_string(start.size()));
  }
  DecodePath path;
  if (len == 0) return path;
  check_finite(emissions);

  // best(t, j): best prefix score ending in tag j at position t.
  Eigen::MatrixXd best = Eigen::MatrixXd::Constant(len, n, kNegInf);
  Eigen::MatrixXi back = Eigen::MatrixXi::Constant(len, n, -1);
  for (Eigen::Index j = 0; j < n; ++j)
    if (start(j)) best(0, j) = emissions(0, j);

  for (Eigen::Index t = 1; t < len; ++t) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double top = kNegInf;
      int arg = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!mask(i, j) || best(t - 1, i) == kNegInf) continue;
        // Strict comparison keeps the lowest predecessor id on ties.
        if (best(t - 1, i) > top) {
          top = best(t - 1, i);
          arg = static_cast<int>(i);
        }
      }
      if (arg >= 0) {
        best(t, j) = top + emissions(t, j);
        back(t, j) = arg;
      }
    }
  }

  double top = kNegInf;
  int last = -1;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (best(len - 1, j) > top) {
      top = best(len - 1, j);
      last = static_cast<int>(j);
    }
  }
  if (last < 0) fail(ErrorKind::kInvalidArgument, "no path satisfies the transition constraints");

  path.tags.resize(static_cast<std::size_t>(len));
  path.score = top;
  for (Eigen::Index t = len - 1; t >= 0; --t) {
    path.tags[static_cast<std::size_t>(t)] = last;
    if (t > 0) last = back(t, last);
  }
  return path;
}

DecodePath greedy_decode(const EmissionMatrix& emissions) {
  DecodePath path;
  path.tags.reserve(static_cast<std::size_t>(emissions.rows()));
  for (Eigen::Index t = 0; t < emissions.rows(); ++t) {
    Eigen::Index arg = 0;
    emissions.row(t).maxCoeff(&arg);
    path.tags.push_back(static_cast<int>(arg));
    path.score += emissions(t, arg);
  }
  return path;
}

double path_score(const EmissionMatrix& emissions, const std::vector<int>& path) {
  double score = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) score += emissions(static_cast<Eigen::Index>(t), path[t]);
  return score;
}

}  // namespace srlfuse
