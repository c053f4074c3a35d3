#pragma once

// Independent reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "srlfuse/bio.hpp"
#include "srlfuse/decoding.hpp"
#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/nn/parameters.hpp"
#include "srlfuse/predicate.hpp"

namespace srlfuse::oracle {

// POS provider returning a fixed tag sequence, or a per-word map.
class FixedPos final : public PosProvider {
 public:
  explicit FixedPos(std::vector<std::string> tags) : tags_(std::move(tags)) {}
  std::vector<std::string> tag(std::span<const std::string> tokens) const override {
    if (!tags_.empty()) return tags_;
    return std::vector<std::string>(tokens.size(), "NN");
  }

 private:
  std::vector<std::string> tags_;
};

struct BruteForcePath {
  std::vector<int> tags;
  double score = -std::numeric_limits<double>::infinity();
  bool found = false;
};

// Enumerates every tag sequence. Equal scores go to the path that is smaller
// when compared from the last position backwards.
inline BruteForcePath brute_force_decode(const EmissionMatrix& e, const BoolMatrix& mask, const BoolVector& start) {
  const int n = static_cast<int>(e.rows()), k = static_cast<int>(e.cols());
  BruteForcePath best;
  if (n == 0) {
    best.found = true;
    best.score = 0.0;
    return best;
  }
  std::vector<int> path(static_cast<std::size_t>(n), 0);
  auto later_is_smaller = [&](const std::vector<int>& a, const std::vector<int>& b) {
    for (int i = n - 1; i >= 0; --i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  };
  while (true) {
    bool ok = start(path[0]);
    for (int i = 1; ok && i < n; ++i) ok = mask(path[i - 1], path[i]);
    if (ok) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += e(i, path[i]);
      if (!best.found || s > best.score || (s == best.score && later_is_smaller(path, best.tags))) {
        best.found = true;
        best.score = s;
        best.tags = path;
      }
    }
    int pos = 0;
    while (pos < n && ++path[pos] == k) path[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

// Alphabet over role names "R0".."R{roles-1}".
inline TagAlphabet alphabet_with_roles(int roles) {
  std::vector<std::string> names;
  for (int r = 0; r < roles; ++r) names.push_back("R" + std::to_string(r));
  return TagAlphabet(names);
}

// Random valid BIO sequence: random non-overlapping spans.
template <typename Rng>
std::vector<BioTag> random_valid_bio(Rng& rng, std::size_t length, const std::vector<std::string>& roles) {
  std::vector<BioTag> tags;
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<std::size_t> role(0, roles.size() - 1);
  std::uniform_int_distribution<int> span_len(1, 3);
  std::size_t i = 0;
  while (i < length) {
    if (coin(rng) == 0) {
      tags.push_back(BioTag::outside());
      ++i;
      continue;
    }
    const auto& r = roles[role(rng)];
    const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(span_len(rng)), length - i);
    tags.push_back(BioTag::begin(r));
    for (std::size_t j = 1; j < len; ++j) tags.push_back(BioTag::inside(r));
    i += len;
  }
  return tags;
}

// Relative error |a - n| / max(|a|, |n|, 1e-6).
inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

struct GradCheckResult {
  int coordinates = 0;
  double max_relative_error = 0.0;
  std::string worst;
};

// Compares backprop gradients of a scalar loss with central differences on
// `coordinates` randomly chosen trainable scalars.
inline GradCheckResult gradient_check(nn::ParameterSet& params, const std::function<nn::Var(nn::Graph&)>& loss,
                                      int coordinates, std::uint64_t seed, double h = 1e-5) {
  params.zero_grad();
  {
    nn::Graph g(true);
    g.backward(loss(g));
  }
  std::vector<nn::Parameter*> pool;
  std::vector<double> weights;
  for (auto* p : params.all())
    if (p->trainable() && p->value.size() > 0) {
      pool.push_back(p);
      weights.push_back(static_cast<double>(p->value.size()));
    }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  auto eval = [&] {
    nn::Graph g(true);
    return loss(g).value()(0, 0);
  };
  GradCheckResult out;
  for (int c = 0; c < coordinates; ++c) {
    auto* p = pool[pick(rng)];
    std::uniform_int_distribution<Eigen::Index> at(0, p->value.size() - 1);
    const Eigen::Index idx = at(rng);
    double& x = p->value.data()[idx];
    const double saved = x;
    x = saved + h;
    const double up = eval();
    x = saved - h;
    const double down = eval();
    x = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = p->grad.data()[idx];
    const double err = relative_error(analytic, numeric);
    if (err > out.max_relative_error) {
      out.max_relative_error = err;
      out.worst = p->name() + "[" + std::to_string(idx) + "] analytic=" + std::to_string(analytic) +
                  " numeric=" + std::to_string(numeric);
    }
    ++out.coordinates;
  }
  return out;
}

}  // namespace srlfuse::oracle
