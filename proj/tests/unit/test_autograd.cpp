#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srlfuse/error.hpp"
#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/nn/layers.hpp"
#include "srlfuse/nn/optim.hpp"

namespace srlfuse::nn {
namespace {

using Builder = std::function<Var(Graph&, const std::vector<Var>&)>;

// Gradient check of sum(op(params...) * R) for a fixed random R.
double check_op(const std::vector<std::pair<Eigen::Index, Eigen::Index>>& shapes, const Builder& op,
                std::uint64_t seed = 1) {
  ParameterSet params;
  Rng rng(seed);
  for (std::size_t i = 0; i < shapes.size(); ++i)
    params.uniform("p" + std::to_string(i), shapes[i].first, shapes[i].second, 1.0, rng);
  Matrix weights;
  auto loss = [&](Graph& g) {
    std::vector<Var> in;
    for (auto* p : params.all()) in.push_back(g.param(*p));
    Var out = op(g, in);
    if (weights.size() == 0) {
      Rng wr(seed + 100);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      weights = Matrix::NullaryExpr(out.rows(), out.cols(), [&] { return u(wr); });
    }
    return sum(cmul_const(out, weights));
  };
  return oracle::gradient_check(params, loss, 30, seed).max_relative_error;
}

constexpr double kTol = 1e-6;

TEST(Autograd, ElementwiseOps) {
  EXPECT_LT(check_op({{3, 4}, {4, 2}}, [](Graph&, auto& v) { return matmul(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {3, 4}}, [](Graph&, auto& v) { return add(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {3, 4}}, [](Graph&, auto& v) { return sub(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {3, 4}}, [](Graph&, auto& v) { return cmul(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return scale(v[0], -2.5); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return add_scalar(v[0], 0.3); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {1, 4}}, [](Graph&, auto& v) { return add_bias(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {3, 1}}, [](Graph&, auto& v) { return add_col(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}, {1, 4}}, [](Graph&, auto& v) { return cmul_row(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return sigmoid(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return tanh(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return relu(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return transpose(v[0]); }), kTol);
}

TEST(Autograd, ShapeOps) {
  EXPECT_LT(check_op({{3, 2}, {3, 4}}, [](Graph&, auto& v) { return hcat({v[0], v[1]}); }), kTol);
  EXPECT_LT(check_op({{2, 3}, {4, 3}}, [](Graph&, auto& v) { return vcat(std::span<const Var>(v)); }), kTol);
  EXPECT_LT(check_op({{5, 3}}, [](Graph&, auto& v) { return slice_rows(v[0], 1, 3); }), kTol);
  EXPECT_LT(check_op({{3, 5}}, [](Graph&, auto& v) { return slice_cols(v[0], 2, 2); }), kTol);
  EXPECT_LT(check_op({{1, 4}}, [](Graph&, auto& v) { return repeat_rows(v[0], 3); }), kTol);
}

TEST(Autograd, Reductions) {
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return sum(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return mean_rows(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return max_rows(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return max_cols(v[0]); }), kTol);
}

TEST(Autograd, Normalisers) {
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return softmax_rows(v[0]); }), kTol);
  EXPECT_LT(check_op({{3, 4}}, [](Graph&, auto& v) { return log_softmax_rows(v[0]); }), kTol);
  EXPECT_LT(check_op({{5, 1}}, [](Graph&, auto& v) { return softmax_col(v[0]); }), kTol);
  const int targets[] = {2, 0, 3};
  EXPECT_LT(check_op({{3, 4}}, [&](Graph&, auto& v) { return pick_nll(log_softmax_rows(v[0]), targets); }), kTol);
}

TEST(Autograd, FusedCells) {
  EXPECT_LT(check_op({{2, 12}, {2, 3}}, [](Graph&, auto& v) { return lstm_cell(v[0], v[1]); }), kTol);
  EXPECT_LT(check_op({{2, 15}, {2, 3}, {2, 3}}, [](Graph&, auto& v) { return highway_lstm_cell(v[0], v[1], v[2]); }),
            kTol);
  EXPECT_LT(check_op({{2, 9}, {2, 9}, {2, 3}}, [](Graph&, auto& v) { return gru_cell(v[0], v[1], v[2]); }), kTol);
}

TEST(Autograd, LookupScattersIntoSelectedRows) {
  ParameterSet params;
  Rng rng(4);
  auto& table = params.uniform("table", 5, 3, 1.0, rng);
  const int ids[] = {1, 3, 1};
  Graph g(true);
  g.backward(sum(g.lookup(table, ids)));
  EXPECT_TRUE(table.grad.row(0).isZero());
  EXPECT_TRUE(table.grad.row(2).isZero());
  EXPECT_TRUE(table.grad.row(1).isApproxToConstant(2.0));
  EXPECT_TRUE(table.grad.row(3).isApproxToConstant(1.0));
}

TEST(Autograd, ShapeMismatchThrows) {
  Graph g(false);
  EXPECT_THROW(matmul(g.constant(Matrix::Zero(2, 3)), g.constant(Matrix::Zero(2, 3))), Error);
  EXPECT_THROW(add(g.constant(Matrix::Zero(2, 3)), g.constant(Matrix::Zero(3, 2))), Error);
}

TEST(Autograd, NormalisedOutputs) {
  Graph g(false);
  Rng rng(2);
  std::normal_distribution<double> n(0.0, 3.0);
  Matrix m = Matrix::NullaryExpr(4, 6, [&] { return n(rng); });
  const Matrix s = softmax_rows(g.constant(m)).value();
  for (Eigen::Index r = 0; r < s.rows(); ++r) EXPECT_NEAR(s.row(r).sum(), 1.0, 1e-12);
  const Matrix l = log_softmax_rows(g.constant(m)).value();
  EXPECT_TRUE(l.array().exp().matrix().isApprox(s, 1e-12));
}

TEST(Layers, RecurrentGradients) {
  ParameterSet params;
  Rng rng(8);
  Lstm lstm(params, "lstm", 3, 4, rng);
  BiLstm bilstm(params, "bilstm", 4, 2, rng);
  HighwayLstm hw(params, "hw", 4, 3, Direction::kBackward, 1.0, rng);
  BiGru gru(params, "gru", 3, 2, rng);
  Matrix x = Matrix::Random(5, 3);
  auto loss = [&](Graph& g) {
    Var h = lstm(g.constant(x), Direction::kForward);
    Var out = hw(bilstm(h));
    return add(sum(tanh(out)), sum(gru(g.constant(x))));
  };
  const auto r = oracle::gradient_check(params, loss, 40, 8);
  EXPECT_LT(r.max_relative_error, 1e-5) << r.worst;
}

TEST(Layers, DirectionReversesProcessing) {
  ParameterSet params;
  Rng rng(1);
  Lstm lstm(params, "lstm", 2, 3, rng);
  Matrix x = Matrix::Random(4, 2);
  Matrix reversed = x.colwise().reverse();
  Graph g(false);
  const Matrix fwd = lstm(g.constant(x), Direction::kForward).value();
  const Matrix bwd = lstm(g.constant(reversed), Direction::kBackward).value();
  EXPECT_TRUE(fwd.isApprox(bwd.colwise().reverse(), 1e-12));
}

TEST(Dropout, MaskValuesAndEvaluationMode) {
  Rng rng(5);
  const Matrix m = dropout_mask(50, 40, 0.25, rng);
  int zeros = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.75) < 1e-12);
    zeros += v == 0.0;
  }
  EXPECT_NEAR(zeros / 2000.0, 0.25, 0.05);
  Graph eval(false);
  Matrix x = Matrix::Ones(3, 3);
  EXPECT_TRUE(dropout(eval.constant(x), 0.5, &rng).value().isApprox(x));
}

TEST(Optim, AdamReducesQuadratic) {
  ParameterSet params;
  auto& w = params.create("w", Matrix::Constant(1, 3, 2.0));
  AdamOptions opts;
  opts.learning_rate = 0.1;
  Adam adam(opts);
  double first = 0.0, last = 0.0;
  for (int step = 0; step < 100; ++step) {
    Graph g(true);
    Var v = g.param(w);
    Var loss = sum(cmul(v, v));
    if (step == 0) first = loss.value()(0, 0);
    last = loss.value()(0, 0);
    g.backward(loss);
    adam.step(params);
  }
  EXPECT_LT(last, 0.01 * first);
  EXPECT_TRUE(w.grad.isZero());
}

TEST(Parameters, ClipAndCopy) {
  ParameterSet a;
  auto& p = a.create("p", Matrix::Zero(1, 2));
  p.grad << 3.0, 4.0;
  EXPECT_DOUBLE_EQ(a.grad_norm(), 5.0);
  a.clip_grad_norm(1.0);
  EXPECT_NEAR(a.grad_norm(), 1.0, 1e-12);
  ParameterSet b;
  b.create("p", Matrix::Ones(1, 2));
  EXPECT_FALSE(a.values_equal(b));
  b.assign_from(a);
  EXPECT_TRUE(a.values_equal(b));
  EXPECT_EQ(a.scalar_count(), 2u);
}

}  // namespace
}  // namespace srlfuse::nn
