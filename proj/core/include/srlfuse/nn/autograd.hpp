#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "srlfuse/nn/parameters.hpp"

namespace srlfuse::nn {

class Graph;

// Handle to a node of a Graph. Cheap to copy; valid while its graph lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  Graph& graph() const { return *graph_; }
  int id() const noexcept { return id_; }
  bool valid() const noexcept { return graph_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* g, int id) : graph_(g), id_(id) {}
  Graph* graph_ = nullptr;
  int id_ = -1;
};

// Dynamic computation tape. Every op appends a node; backward() walks the
// tape in reverse and accumulates into node grads and Parameter::grad.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, int)>;

  explicit Graph(bool training = false) : training_(training) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool training() const noexcept { return training_; }

  Var constant(Matrix value);
  Var param(Parameter& p);
  // Rows of `table` selected by `ids`; the backward pass scatters into the
  // selected rows only.
  Var lookup(Parameter& table, std::span<const int> ids);

  // `loss` must be 1x1.
  void backward(Var loss);

  // Op-construction surface.
  Var record(Matrix value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var record(Matrix value, std::span<const Var> inputs, BackwardFn backward);
  const Matrix& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  const Matrix& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  bool needs_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].needs_grad; }
  // Adds `delta` into the gradient of node `id` (no-op for constants).
  template <typename Expr>
  void accumulate(int id, const Expr& delta) {
    auto& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.needs_grad) return;
    if (n.grad.size() == 0) n.grad = delta;
    else n.grad += delta;
  }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    BackwardFn backward;
    bool needs_grad = false;
  };
  std::vector<Node> nodes_;
  bool training_;
};

// --- elementwise and linear algebra ----------------------------------------
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var cmul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
// Row vector `bias` (1 x d) added to every row of `a` (n x d).
Var add_bias(Var a, Var bias);
// Column vector `v` (n x 1) added to every column of `a` (n x m).
Var add_col(Var a, Var v);
// Every row of `a` (n x d) multiplied elementwise by row vector `v` (1 x d).
Var cmul_row(Var a, Var v);
// Elementwise product with a fixed matrix (dropout masks).
Var cmul_const(Var a, const Matrix& m);
Var add_const(Var a, const Matrix& m);
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
Var transpose(Var a);

// --- shape ------------------------------------------------------------------
Var hcat(std::span<const Var> parts);
Var hcat(std::initializer_list<Var> parts);
Var vcat(std::span<const Var> parts);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
// 1 x d row repeated n times.
Var repeat_rows(Var row, Eigen::Index n);

// --- reductions -------------------------------------------------------------
Var sum(Var a);
Var mean_rows(Var a);  // n x d -> 1 x d
Var max_rows(Var a);   // n x d -> 1 x d, gradient to the first argmax
Var max_cols(Var a);   // n x d -> n x 1

// --- normalisation and losses -----------------------------------------------
Var softmax_rows(Var a);
Var log_softmax_rows(Var a);
Var softmax_col(Var a);  // n x 1 normalised over rows
// -sum_i logp(i, targets[i])
Var pick_nll(Var log_probs, std::span<const int> targets);

// --- fused recurrent cells --------------------------------------------------
// gates: r x 4h laid out [input | forget | output | candidate]; c_prev: r x h.
// Returns [h | c] (r x 2h).
Var lstm_cell(Var gates, Var c_prev);
// Highway LSTM: gates r x 5h with a trailing carry gate k; carry: r x h.
// h = k * carry + (1 - k) * o * tanh(c). Returns [h | c].
Var highway_lstm_cell(Var gates, Var c_prev, Var carry);
// GRU with gates ordered [update | reset | candidate]. x_gates and h_gates
// are r x 3h (h_gates = h_prev U + b_h). Returns h (r x h).
Var gru_cell(Var x_gates, Var h_gates, Var h_prev);

}  // namespace srlfuse::nn
