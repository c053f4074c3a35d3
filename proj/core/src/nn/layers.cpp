#include "srlfuse/nn/layers.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "srlfuse/error.hpp"

namespace srlfuse::nn {

const char* to_string(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng) {
  std::bernoulli_distribution keep(1.0 - p);
  const double s = 1.0 / (1.0 - p);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = keep(rng) ? s : 0.0;
  return m;
}

Var dropout(Var x, double p, Rng* rng) {
  if (!x.graph().training() || p <= 0.0 || rng == nullptr) return x;
  return cmul_const(x, dropout_mask(x.rows(), x.cols(), p, *rng));
}

namespace {

// Runs `step(t, h_in)` over the sequence in the given direction and stacks
// the per-step outputs back into input order.
template <typename Step>
Var unroll(Graph& g, Eigen::Index n, Eigen::Index hidden, Direction dir, Step&& step) {
  if (n == 0) return g.constant(Matrix::Zero(0, hidden));
  std::vector<Var> outputs(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index t = dir == Direction::kForward ? k : n - 1 - k;
    outputs[static_cast<std::size_t>(t)] = step(t);
  }
  return vcat(outputs);
}

Var recurrent_input(Var h, const std::optional<Matrix>& mask) {
  return mask ? cmul_const(h, *mask) : h;
}

std::optional<Matrix> recurrent_mask(Graph& g, Eigen::Index hidden, RecurrentDropout d) {
  if (!g.training() || d.p <= 0.0 || d.rng == nullptr) return std::nullopt;
  return dropout_mask(1, hidden, d.p, *d.rng);
}

}  // namespace

Linear::Linear(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index out, Rng& rng,
               bool use_bias) {
  weight_ = &params.glorot(name + ".weight", in, out, rng);
  if (use_bias) bias_ = &params.zeros(name + ".bias", 1, out);
}

Var Linear::operator()(Var x) const {
  Graph& g = x.graph();
  Var y = matmul(x, g.param(*weight_));
  return bias_ ? add_bias(y, g.param(*bias_)) : y;
}

// ---------------------------------------------------------------------------

Lstm::Lstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng) {
  input_ = &params.glorot(name + ".input", in, 4 * hidden, rng);
  recurrent_ = &params.glorot(name + ".recurrent", hidden, 4 * hidden, rng);
  Matrix b = Matrix::Zero(1, 4 * hidden);
  b.middleCols(hidden, hidden).setOnes();  // forget gate
  bias_ = &params.create(name + ".bias", b);
}

Var Lstm::operator()(Var x, Direction dir, RecurrentDropout dropout) const {
  Graph& g = x.graph();
  const Eigen::Index h = hidden();
  Var xw = add_bias(matmul(x, g.param(*input_)), g.param(*bias_));
  Var u = g.param(*recurrent_);
  const auto mask = recurrent_mask(g, h, dropout);
  Var state = g.constant(Matrix::Zero(1, 2 * h));
  bool first = true;
  return unroll(g, x.rows(), h, dir, [&](Eigen::Index t) {
    Var gates = slice_rows(xw, t, 1);
    Var c_prev = slice_cols(state, h, h);
    if (!first) gates = add(gates, matmul(recurrent_input(slice_cols(state, 0, h), mask), u));
    first = false;
    state = lstm_cell(gates, c_prev);
    return slice_cols(state, 0, h);
  });
}

BiLstm::BiLstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng)
    : forward_(params, name + ".fwd", in, hidden, rng), backward_(params, name + ".bwd", in, hidden, rng) {}

Var BiLstm::operator()(Var x, RecurrentDropout dropout) const {
  return hcat({forward_(x, Direction::kForward, dropout), backward_(x, Direction::kBackward, dropout)});
}

// ---------------------------------------------------------------------------

HighwayLstm::HighwayLstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden,
                         Direction direction, double carry_bias, Rng& rng)
    : direction_(direction) {
  input_ = &params.glorot(name + ".input", in, 5 * hidden, rng);
  recurrent_ = &params.glorot(name + ".recurrent", hidden, 5 * hidden, rng);
  Matrix b = Matrix::Zero(1, 5 * hidden);
  b.middleCols(hidden, hidden).setOnes();
  b.rightCols(hidden).setConstant(carry_bias);
  bias_ = &params.create(name + ".bias", b);
  if (in != hidden) projection_ = &params.glorot(name + ".carry", in, hidden, rng);
}

Var HighwayLstm::operator()(Var x, RecurrentDropout dropout) const {
  Graph& g = x.graph();
  const Eigen::Index h = hidden();
  Var xw = add_bias(matmul(x, g.param(*input_)), g.param(*bias_));
  Var carry_all = projection_ ? matmul(x, g.param(*projection_)) : x;
  Var u = g.param(*recurrent_);
  const auto mask = recurrent_mask(g, h, dropout);
  Var state = g.constant(Matrix::Zero(1, 2 * h));
  bool first = true;
  return unroll(g, x.rows(), h, direction_, [&](Eigen::Index t) {
    Var gates = slice_rows(xw, t, 1);
    Var c_prev = slice_cols(state, h, h);
    if (!first) gates = add(gates, matmul(recurrent_input(slice_cols(state, 0, h), mask), u));
    first = false;
    state = highway_lstm_cell(gates, c_prev, slice_rows(carry_all, t, 1));
    return slice_cols(state, 0, h);
  });
}

double HighwayLstm::mean_carry_gate(const Matrix& x) const {
  Graph g(false);
  const Eigen::Index h = hidden();
  Var xv = g.constant(x);
  Var xw = add_bias(matmul(xv, g.param(*input_)), g.param(*bias_));
  Var carry_all = projection_ ? matmul(xv, g.param(*projection_)) : xv;
  Var u = g.param(*recurrent_);
  Var state = g.constant(Matrix::Zero(1, 2 * h));
  double total = 0.0;
  const Eigen::Index n = x.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index t = direction_ == Direction::kForward ? k : n - 1 - k;
    Var gates = slice_rows(xw, t, 1);
    if (k > 0) gates = add(gates, matmul(slice_cols(state, 0, h), u));
    const Matrix pre = gates.value().rightCols(h);
    total += (1.0 / (1.0 + (-pre.array()).exp())).mean();
    state = highway_lstm_cell(gates, slice_cols(state, h, h), slice_rows(carry_all, t, 1));
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

Gru::Gru(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng) {
  input_ = &params.glorot(name + ".input", in, 3 * hidden, rng);
  input_bias_ = &params.zeros(name + ".input_bias", 1, 3 * hidden);
  recurrent_ = &params.glorot(name + ".recurrent", hidden, 3 * hidden, rng);
  recurrent_bias_ = &params.zeros(name + ".recurrent_bias", 1, 3 * hidden);
}

Var Gru::operator()(Var x, Direction dir, RecurrentDropout dropout) const {
  Graph& g = x.graph();
  const Eigen::Index h = hidden();
  Var xg = add_bias(matmul(x, g.param(*input_)), g.param(*input_bias_));
  Var u = g.param(*recurrent_);
  Var ub = g.param(*recurrent_bias_);
  const auto mask = recurrent_mask(g, h, dropout);
  Var state = g.constant(Matrix::Zero(1, h));
  bool first = true;
  return unroll(g, x.rows(), h, dir, [&](Eigen::Index t) {
    Var hg = first ? ub : add(matmul(recurrent_input(state, mask), u), ub);
    first = false;
    state = gru_cell(slice_rows(xg, t, 1), hg, state);
    return state;
  });
}

BiGru::BiGru(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng)
    : forward_(params, name + ".fwd", in, hidden, rng), backward_(params, name + ".bwd", in, hidden, rng) {}

Var BiGru::operator()(Var x, RecurrentDropout dropout) const {
  return hcat({forward_(x, Direction::kForward, dropout), backward_(x, Direction::kBackward, dropout)});
}

}  // namespace srlfuse::nn
