#include "srlfuse/nn/autograd.hpp"

#include <cmath>
#include <string>

#include "srlfuse/error.hpp"

namespace srlfuse::nn {

namespace {

void require_same_graph(Var a, Var b) {
  if (!a.valid() || !b.valid() || &a.graph() != &b.graph())
    fail(ErrorKind::kInvalidArgument, "vars belong to different graphs");
}

void require_shape(bool ok, const char* op, const Matrix& a, const Matrix& b) {
  if (!ok)
    fail(ErrorKind::kDimension, std::string(op) + ": incompatible shapes " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
}

Matrix sigmoid_of(const Matrix& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

}  // namespace

const Matrix& Var::value() const { return graph_->value(id_); }

Var Graph::record(Matrix value, std::span<const Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const auto& in : inputs) {
    if (&in.graph() != this) fail(ErrorKind::kInvalidArgument, "input var from another graph");
    node.needs_grad = node.needs_grad || nodes_[static_cast<std::size_t>(in.id())].needs_grad;
  }
  if (node.needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Graph::record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()), std::move(backward));
}

Var Graph::constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Graph::param(Parameter& p) {
  Node node;
  node.value = p.value;
  node.needs_grad = p.trainable();
  if (node.needs_grad) {
    Parameter* target = &p;
    node.backward = [target](Graph& g, int self) {
      if (target->grad.size() == 0) target->grad = Matrix::Zero(target->value.rows(), target->value.cols());
      target->grad += g.grad(self);
    };
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Graph::lookup(Parameter& table, std::span<const int> ids) {
  Matrix out(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= table.value.rows())
      fail(ErrorKind::kOutOfRange, "lookup id " + std::to_string(ids[i]) + " outside table " + table.name());
    out.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]);
  }
  Node node;
  node.value = std::move(out);
  node.needs_grad = table.trainable();
  if (node.needs_grad) {
    Parameter* target = &table;
    std::vector<int> rows(ids.begin(), ids.end());
    node.backward = [target, rows = std::move(rows)](Graph& g, int self) {
      if (target->grad.size() == 0) target->grad = Matrix::Zero(target->value.rows(), target->value.cols());
      const Matrix& gout = g.grad(self);
      for (std::size_t i = 0; i < rows.size(); ++i) target->grad.row(rows[i]) += gout.row(static_cast<Eigen::Index>(i));
    };
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

void Graph::backward(Var loss) {
  if (&loss.graph() != this) fail(ErrorKind::kInvalidArgument, "loss from another graph");
  if (loss.rows() != 1 || loss.cols() != 1) fail(ErrorKind::kDimension, "backward requires a 1x1 loss");
  auto& root = nodes_[static_cast<std::size_t>(loss.id())];
  if (!root.needs_grad) return;
  root.grad = Matrix::Ones(1, 1);
  for (int i = loss.id(); i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (!n.needs_grad || n.grad.size() == 0 || !n.backward) continue;
    n.backward(*this, i);
  }
}

// ---------------------------------------------------------------------------

Var matmul(Var a, Var b) {
  require_same_graph(a, b);
  require_shape(a.cols() == b.rows(), "matmul", a.value(), b.value());
  const int ia = a.id(), ib = b.id();
  return a.graph().record(a.value() * b.value(), {a, b}, [ia, ib](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    if (g.needs_grad(ia)) g.accumulate(ia, go * g.value(ib).transpose());
    if (g.needs_grad(ib)) g.accumulate(ib, g.value(ia).transpose() * go);
  });
}

Var add(Var a, Var b) {
  require_same_graph(a, b);
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "add", a.value(), b.value());
  const int ia = a.id(), ib = b.id();
  return a.graph().record(a.value() + b.value(), {a, b}, [ia, ib](Graph& g, int self) {
    g.accumulate(ia, g.grad(self));
    g.accumulate(ib, g.grad(self));
  });
}

Var sub(Var a, Var b) {
  require_same_graph(a, b);
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "sub", a.value(), b.value());
  const int ia = a.id(), ib = b.id();
  return a.graph().record(a.value() - b.value(), {a, b}, [ia, ib](Graph& g, int self) {
    g.accumulate(ia, g.grad(self));
    g.accumulate(ib, -g.grad(self));
  });
}

Var cmul(Var a, Var b) {
  require_same_graph(a, b);
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "cmul", a.value(), b.value());
  const int ia = a.id(), ib = b.id();
  return a.graph().record(a.value().cwiseProduct(b.value()), {a, b}, [ia, ib](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    if (g.needs_grad(ia)) g.accumulate(ia, go.cwiseProduct(g.value(ib)));
    if (g.needs_grad(ib)) g.accumulate(ib, go.cwiseProduct(g.value(ia)));
  });
}

Var scale(Var a, double s) {
  const int ia = a.id();
  return a.graph().record(a.value() * s, {a}, [ia, s](Graph& g, int self) { g.accumulate(ia, g.grad(self) * s); });
}

Var add_scalar(Var a, double s) {
  const int ia = a.id();
  return a.graph().record((a.value().array() + s).matrix(), {a},
                          [ia](Graph& g, int self) { g.accumulate(ia, g.grad(self)); });
}

Var add_bias(Var a, Var bias) {
  require_same_graph(a, bias);
  require_shape(bias.rows() == 1 && bias.cols() == a.cols(), "add_bias", a.value(), bias.value());
  const int ia = a.id(), ib = bias.id();
  Matrix out = a.value();
  out.rowwise() += bias.value().row(0);
  return a.graph().record(std::move(out), {a, bias}, [ia, ib](Graph& g, int self) {
    g.accumulate(ia, g.grad(self));
    if (g.needs_grad(ib)) g.accumulate(ib, g.grad(self).colwise().sum());
  });
}

Var add_col(Var a, Var v) {
  require_same_graph(a, v);
  require_shape(v.cols() == 1 && v.rows() == a.rows(), "add_col", a.value(), v.value());
  const int ia = a.id(), iv = v.id();
  Matrix out = a.value();
  out.colwise() += v.value().col(0);
  return a.graph().record(std::move(out), {a, v}, [ia, iv](Graph& g, int self) {
    g.accumulate(ia, g.grad(self));
    if (g.needs_grad(iv)) g.accumulate(iv, g.grad(self).rowwise().sum());
  });
}

Var cmul_row(Var a, Var v) {
  require_same_graph(a, v);
  require_shape(v.rows() == 1 && v.cols() == a.cols(), "cmul_row", a.value(), v.value());
  const int ia = a.id(), iv = v.id();
  Matrix out = a.value().array().rowwise() * v.value().row(0).array();
  return a.graph().record(std::move(out), {a, v}, [ia, iv](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    if (g.needs_grad(ia)) g.accumulate(ia, (go.array().rowwise() * g.value(iv).row(0).array()).matrix());
    if (g.needs_grad(iv)) g.accumulate(iv, go.cwiseProduct(g.value(ia)).colwise().sum());
  });
}

Var cmul_const(Var a, const Matrix& m) {
  require_shape(a.rows() == m.rows() && a.cols() == m.cols(), "cmul_const", a.value(), m);
  const int ia = a.id();
  return a.graph().record(a.value().cwiseProduct(m), {a},
                          [ia, m](Graph& g, int self) { g.accumulate(ia, g.grad(self).cwiseProduct(m)); });
}

Var add_const(Var a, const Matrix& m) {
  require_shape(a.rows() == m.rows() && a.cols() == m.cols(), "add_const", a.value(), m);
  const int ia = a.id();
  return a.graph().record(a.value() + m, {a}, [ia](Graph& g, int self) { g.accumulate(ia, g.grad(self)); });
}

Var sigmoid(Var a) {
  const int ia = a.id();
  return a.graph().record(sigmoid_of(a.value()), {a}, [ia](Graph& g, int self) {
    const auto y = g.value(self).array();
    g.accumulate(ia, (g.grad(self).array() * y * (1.0 - y)).matrix());
  });
}

Var tanh(Var a) {
  const int ia = a.id();
  return a.graph().record(a.value().array().tanh().matrix(), {a}, [ia](Graph& g, int self) {
    const auto y = g.value(self).array();
    g.accumulate(ia, (g.grad(self).array() * (1.0 - y.square())).matrix());
  });
}

Var relu(Var a) {
  const int ia = a.id();
  return a.graph().record(a.value().cwiseMax(0.0), {a}, [ia](Graph& g, int self) {
    g.accumulate(ia, (g.value(ia).array() > 0.0).select(g.grad(self), 0.0).matrix());
  });
}

Var transpose(Var a) {
  const int ia = a.id();
  return a.graph().record(a.value().transpose(), {a},
                          [ia](Graph& g, int self) { g.accumulate(ia, g.grad(self).transpose()); });
}

// ---------------------------------------------------------------------------

Var hcat(std::span<const Var> parts) {
  if (parts.empty()) fail(ErrorKind::kInvalidArgument, "hcat of nothing");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    require_same_graph(parts.front(), p);
    require_shape(p.rows() == rows, "hcat", parts.front().value(), p.value());
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> layout;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    layout.emplace_back(p.id(), at);
    at += p.cols();
  }
  return parts.front().graph().record(std::move(out), parts, [layout = std::move(layout)](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    for (const auto& [id, offset] : layout)
      if (g.needs_grad(id)) g.accumulate(id, go.middleCols(offset, g.value(id).cols()));
  });
}

Var hcat(std::initializer_list<Var> parts) { return hcat(std::span<const Var>(parts.begin(), parts.size())); }

Var vcat(std::span<const Var> parts) {
  if (parts.empty()) fail(ErrorKind::kInvalidArgument, "vcat of nothing");
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    require_same_graph(parts.front(), p);
    require_shape(p.cols() == cols, "vcat", parts.front().value(), p.value());
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<std::pair<int, Eigen::Index>> layout;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    layout.emplace_back(p.id(), at);
    at += p.rows();
  }
  return parts.front().graph().record(std::move(out), parts, [layout = std::move(layout)](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    for (const auto& [id, offset] : layout)
      if (g.needs_grad(id)) g.accumulate(id, go.middleRows(offset, g.value(id).rows()));
  });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows())
    fail(ErrorKind::kOutOfRange, "slice_rows outside matrix");
  const int ia = a.id();
  return a.graph().record(a.value().middleRows(start, count), {a}, [ia, start, count](Graph& g, int self) {
    if (!g.needs_grad(ia)) return;
    Matrix delta = Matrix::Zero(g.value(ia).rows(), g.value(ia).cols());
    delta.middleRows(start, count) = g.grad(self);
    g.accumulate(ia, delta);
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols())
    fail(ErrorKind::kOutOfRange, "slice_cols outside matrix");
  const int ia = a.id();
  return a.graph().record(a.value().middleCols(start, count), {a}, [ia, start, count](Graph& g, int self) {
    if (!g.needs_grad(ia)) return;
    Matrix delta = Matrix::Zero(g.value(ia).rows(), g.value(ia).cols());
    delta.middleCols(start, count) = g.grad(self);
    g.accumulate(ia, delta);
  });
}

Var repeat_rows(Var row, Eigen::Index n) {
  if (row.rows() != 1) fail(ErrorKind::kDimension, "repeat_rows expects a row vector");
  const int ir = row.id();
  return row.graph().record(row.value().replicate(n, 1), {row},
                            [ir](Graph& g, int self) { g.accumulate(ir, g.grad(self).colwise().sum()); });
}

// ---------------------------------------------------------------------------

Var sum(Var a) {
  const int ia = a.id();
  Matrix out(1, 1);
  out(0, 0) = a.value().sum();
  return a.graph().record(std::move(out), {a}, [ia](Graph& g, int self) {
    g.accumulate(ia, Matrix::Constant(g.value(ia).rows(), g.value(ia).cols(), g.grad(self)(0, 0)));
  });
}

Var mean_rows(Var a) {
  if (a.rows() == 0) fail(ErrorKind::kDimension, "mean_rows of an empty matrix");
  const int ia = a.id();
  const double n = static_cast<double>(a.rows());
  return a.graph().record(a.value().colwise().mean(), {a}, [ia, n](Graph& g, int self) {
    g.accumulate(ia, (g.grad(self) / n).replicate(g.value(ia).rows(), 1));
  });
}

Var max_rows(Var a) {
  if (a.rows() == 0) fail(ErrorKind::kDimension, "max_rows of an empty matrix");
  const int ia = a.id();
  const Matrix& v = a.value();
  Matrix out(1, v.cols());
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index c = 0; c < v.cols(); ++c) out(0, c) = v.col(c).maxCoeff(&arg[static_cast<std::size_t>(c)]);
  return a.graph().record(std::move(out), {a}, [ia, arg = std::move(arg)](Graph& g, int self) {
    Matrix delta = Matrix::Zero(g.value(ia).rows(), g.value(ia).cols());
    const Matrix& go = g.grad(self);
    for (std::size_t c = 0; c < arg.size(); ++c)
      delta(arg[c], static_cast<Eigen::Index>(c)) = go(0, static_cast<Eigen::Index>(c));
    g.accumulate(ia, delta);
  });
}

Var max_cols(Var a) {
  if (a.cols() == 0) fail(ErrorKind::kDimension, "max_cols of an empty matrix");
  const int ia = a.id();
  const Matrix& v = a.value();
  Matrix out(v.rows(), 1);
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(v.rows()));
  for (Eigen::Index r = 0; r < v.rows(); ++r) out(r, 0) = v.row(r).maxCoeff(&arg[static_cast<std::size_t>(r)]);
  return a.graph().record(std::move(out), {a}, [ia, arg = std::move(arg)](Graph& g, int self) {
    Matrix delta = Matrix::Zero(g.value(ia).rows(), g.value(ia).cols());
    const Matrix& go = g.grad(self);
    for (std::size_t r = 0; r < arg.size(); ++r)
      delta(static_cast<Eigen::Index>(r), arg[r]) = go(static_cast<Eigen::Index>(r), 0);
    g.accumulate(ia, delta);
  });
}

// ---------------------------------------------------------------------------

namespace {

Matrix softmax_rows_of(const Matrix& x) {
  Matrix shifted = x.colwise() - x.rowwise().maxCoeff();
  Matrix e = shifted.array().exp().matrix();
  return e.array().colwise() / e.rowwise().sum().array();
}

}  // namespace

Var softmax_rows(Var a) {
  const int ia = a.id();
  return a.graph().record(softmax_rows_of(a.value()), {a}, [ia](Graph& g, int self) {
    const Matrix& y = g.value(self);
    const Matrix& go = g.grad(self);
    Eigen::VectorXd dot = go.cwiseProduct(y).rowwise().sum();
    g.accumulate(ia, (y.array() * (go.colwise() - dot).array()).matrix());
  });
}

Var log_softmax_rows(Var a) {
  const int ia = a.id();
  const Matrix& x = a.value();
  Eigen::VectorXd mx = x.rowwise().maxCoeff();
  Matrix shifted = x.colwise() - mx;
  Eigen::VectorXd lse = shifted.array().exp().rowwise().sum().log().matrix();
  Matrix out = shifted.colwise() - lse;
  return a.graph().record(std::move(out), {a}, [ia](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    Matrix p = g.value(self).array().exp().matrix();
    Eigen::VectorXd s = go.rowwise().sum();
    g.accumulate(ia, go - (p.array().colwise() * s.array()).matrix());
  });
}

Var softmax_col(Var a) {
  if (a.cols() != 1) fail(ErrorKind::kDimension, "softmax_col expects a column vector");
  return transpose(softmax_rows(transpose(a)));
}

Var pick_nll(Var log_probs, std::span<const int> targets) {
  if (static_cast<Eigen::Index>(targets.size()) != log_probs.rows())
    fail(ErrorKind::kDimension, "pick_nll: target count does not match rows");
  const Matrix& lp = log_probs.value();
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= lp.cols()) fail(ErrorKind::kOutOfRange, "pick_nll: target outside range");
    total -= lp(static_cast<Eigen::Index>(i), targets[i]);
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  const int il = log_probs.id();
  std::vector<int> t(targets.begin(), targets.end());
  return log_probs.graph().record(std::move(out), {log_probs}, [il, t = std::move(t)](Graph& g, int self) {
    Matrix delta = Matrix::Zero(g.value(il).rows(), g.value(il).cols());
    const double go = g.grad(self)(0, 0);
    for (std::size_t i = 0; i < t.size(); ++i) delta(static_cast<Eigen::Index>(i), t[i]) -= go;
    g.accumulate(il, delta);
  });
}

// ---------------------------------------------------------------------------

Var lstm_cell(Var gates, Var c_prev) {
  require_same_graph(gates, c_prev);
  const Eigen::Index h = c_prev.cols();
  require_shape(gates.cols() == 4 * h && gates.rows() == c_prev.rows(), "lstm_cell", gates.value(), c_prev.value());
  const Matrix& gv = gates.value();
  const Matrix i = sigmoid_of(gv.leftCols(h));
  const Matrix f = sigmoid_of(gv.middleCols(h, h));
  const Matrix o = sigmoid_of(gv.middleCols(2 * h, h));
  const Matrix u = gv.middleCols(3 * h, h).array().tanh().matrix();
  const Matrix c = f.cwiseProduct(c_prev.value()) + i.cwiseProduct(u);
  const Matrix tc = c.array().tanh().matrix();
  Matrix out(gv.rows(), 2 * h);
  out.leftCols(h) = o.cwiseProduct(tc);
  out.rightCols(h) = c;
  const int ig = gates.id(), ic = c_prev.id();
  return gates.graph().record(std::move(out), {gates, c_prev}, [=](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    const auto dh = go.leftCols(h).array();
    const auto tca = tc.array();
    const Eigen::ArrayXXd dc = go.rightCols(h).array() + dh * o.array() * (1.0 - tca.square());
    if (g.needs_grad(ig)) {
      Matrix dg(go.rows(), 4 * h);
      dg.leftCols(h) = (dc * u.array() * i.array() * (1.0 - i.array())).matrix();
      dg.middleCols(h, h) = (dc * g.value(ic).array() * f.array() * (1.0 - f.array())).matrix();
      dg.middleCols(2 * h, h) = (dh * tca * o.array() * (1.0 - o.array())).matrix();
      dg.rightCols(h) = (dc * i.array() * (1.0 - u.array().square())).matrix();
      g.accumulate(ig, dg);
    }
    if (g.needs_grad(ic)) g.accumulate(ic, (dc * f.array()).matrix());
  });
}

Var highway_lstm_cell(Var gates, Var c_prev, Var carry) {
  require_same_graph(gates, c_prev);
  require_same_graph(gates, carry);
  const Eigen::Index h = c_prev.cols();
  require_shape(gates.cols() == 5 * h && gates.rows() == c_prev.rows(), "highway_lstm_cell", gates.value(),
                c_prev.value());
  require_shape(carry.cols() == h && carry.rows() == c_prev.rows(), "highway_lstm_cell", carry.value(),
                c_prev.value());
  const Matrix& gv = gates.value();
  const Matrix i = sigmoid_of(gv.leftCols(h));
  const Matrix f = sigmoid_of(gv.middleCols(h, h));
  const Matrix o = sigmoid_of(gv.middleCols(2 * h, h));
  const Matrix u = gv.middleCols(3 * h, h).array().tanh().matrix();
  const Matrix k = sigmoid_of(gv.middleCols(4 * h, h));
  const Matrix c = f.cwiseProduct(c_prev.value()) + i.cwiseProduct(u);
  const Matrix tc = c.array().tanh().matrix();
  const Matrix hl = o.cwiseProduct(tc);
  Matrix out(gv.rows(), 2 * h);
  out.leftCols(h) = (k.array() * carry.value().array() + (1.0 - k.array()) * hl.array()).matrix();
  out.rightCols(h) = c;
  const int ig = gates.id(), ic = c_prev.id(), ik = carry.id();
  return gates.graph().record(std::move(out), {gates, c_prev, carry}, [=](Graph& g, int self) {
    const Matrix& go = g.grad(self);
    const auto dh = go.leftCols(h).array();
    const Eigen::ArrayXXd dhl = dh * (1.0 - k.array());
    const auto tca = tc.array();
    const Eigen::ArrayXXd dc = go.rightCols(h).array() + dhl * o.array() * (1.0 - tca.square());
    if (g.needs_grad(ig)) {
      Matrix dg(go.rows(), 5 * h);
      dg.leftCols(h) = (dc * u.array() * i.array() * (1.0 - i.array())).matrix();
      dg.middleCols(h, h) = (dc * g.value(ic).array() * f.array() * (1.0 - f.array())).matrix();
      dg.middleCols(2 * h, h) = (dhl * tca * o.array() * (1.0 - o.array())).matrix();
      dg.middleCols(3 * h, h) = (dc * i.array() * (1.0 - u.array().square())).matrix();
      dg.rightCols(h) = (dh * (g.value(ik).array() - hl.array()) * k.array() * (1.0 - k.array())).matrix();
      g.accumulate(ig, dg);
    }
    if (g.needs_grad(ic)) g.accumulate(ic, (dc * f.array()).matrix());
    if (g.needs_grad(ik)) g.accumulate(ik, (dh * k.array()).matrix());
  });
}

Var gru_cell(Var x_gates, Var h_gates, Var h_prev) {
  require_same_graph(x_gates, h_gates);
  require_same_graph(x_gates, h_prev);
  const Eigen::Index h = h_prev.cols();
  require_shape(x_gates.cols() == 3 * h && x_gates.rows() == h_prev.rows(), "gru_cell", x_gates.value(),
                h_prev.value());
  require_shape(h_gates.cols() == 3 * h && h_gates.rows() == h_prev.rows(), "gru_cell", h_gates.value(),
                h_prev.value());
  const Matrix& xg = x_gates.value();
  const Matrix& hg = h_gates.value();
  const Matrix z = sigmoid_of(xg.leftCols(h) + hg.leftCols(h));
  const Matrix r = sigmoid_of(xg.middleCols(h, h) + hg.middleCols(h, h));
  const Matrix hn = hg.rightCols(h);
  const Matrix n = (xg.rightCols(h) + r.cwiseProduct(hn)).array().tanh().matrix();
  Matrix out = ((1.0 - z.array()) * n.array() + z.array() * h_prev.value().array()).matrix();
  const int ix = x_gates.id(), ih = h_gates.id(), ip = h_prev.id();
  return x_gates.graph().record(std::move(out), {x_gates, h_gates, h_prev}, [=](Graph& g, int self) {
    const auto dh = g.grad(self).array();
    const Eigen::ArrayXXd dan = dh * (1.0 - z.array()) * (1.0 - n.array().square());
    const Eigen::ArrayXXd daz = dh * (g.value(ip).array() - n.array()) * z.array() * (1.0 - z.array());
    const Eigen::ArrayXXd dar = dan * hn.array() * r.array() * (1.0 - r.array());
    if (g.needs_grad(ix)) {
      Matrix d(dh.rows(), 3 * h);
      d.leftCols(h) = daz.matrix();
      d.middleCols(h, h) = dar.matrix();
      d.rightCols(h) = dan.matrix();
      g.accumulate(ix, d);
    }
    if (g.needs_grad(ih)) {
      Matrix d(dh.rows(), 3 * h);
      d.leftCols(h) = daz.matrix();
      d.middleCols(h, h) = dar.matrix();
      d.rightCols(h) = (dan * r.array()).matrix();
      g.accumulate(ih, d);
    }
    if (g.needs_grad(ip)) g.accumulate(ip, (dh * z.array()).matrix());
  });
}

}  // namespace srlfuse::nn
