#pragma once

#include <string>

#include "srlfuse/nn/autograd.hpp"

namespace srlfuse::nn {

enum class Direction { kForward, kBackward };

inline Direction opposite(Direction d) {
  return d == Direction::kForward ? Direction::kBackward : Direction::kForward;
}

const char* to_string(Direction d);

// Inverted-dropout mask: entries are 0 or 1/(1-p).
Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double p, Rng& rng);

// Applies a fresh dropout mask when the graph is in training mode and p > 0.
Var dropout(Var x, double p, Rng* rng);

class Linear {
 public:
  Linear() = default;
  Linear(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index out, Rng& rng,
         bool use_bias = true);

  Var operator()(Var x) const;
  Eigen::Index in_dim() const { return weight_->value.rows(); }
  Eigen::Index out_dim() const { return weight_->value.cols(); }
  Parameter& weight() const { return *weight_; }
  Parameter* bias() const { return bias_; }

 private:
  Parameter* weight_ = nullptr;
  Parameter* bias_ = nullptr;
};

// Recurrent dropout settings. One mask per sequence is shared by every step.
struct RecurrentDropout {
  double p = 0.0;
  Rng* rng = nullptr;
};

class Lstm {
 public:
  Lstm() = default;
  Lstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng);

  // x: n x in -> n x hidden, rows kept in input order.
  Var operator()(Var x, Direction dir, RecurrentDropout dropout = {}) const;
  Eigen::Index hidden() const { return recurrent_->value.rows(); }

 private:
  Parameter* input_ = nullptr;
  Parameter* recurrent_ = nullptr;
  Parameter* bias_ = nullptr;
};

class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng);

  // n x in -> n x 2*hidden ([forward | backward]).
  Var operator()(Var x, RecurrentDropout dropout = {}) const;
  Eigen::Index out_dim() const { return 2 * forward_.hidden(); }

 private:
  Lstm forward_;
  Lstm backward_;
};

// Unidirectional LSTM layer with a highway carry connection around it:
//   h_t = k_t * carry(x_t) + (1 - k_t) * o_t * tanh(c_t)
// where carry is the identity when input and hidden widths match and a
// linear projection otherwise. The carry gate bias starts positive so an
// untrained stack mostly passes its input through.
class HighwayLstm {
 public:
  HighwayLstm() = default;
  HighwayLstm(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden,
              Direction direction, double carry_bias, Rng& rng);

  Var operator()(Var x, RecurrentDropout dropout = {}) const;
  Direction direction() const { return direction_; }
  Eigen::Index hidden() const { return recurrent_->value.rows(); }
  Eigen::Index in_dim() const { return input_->value.rows(); }
  bool identity_carry() const { return projection_ == nullptr; }

  // Mean carry-gate activation over a sequence, for diagnostics.
  double mean_carry_gate(const Matrix& x) const;

 private:
  Parameter* input_ = nullptr;
  Parameter* recurrent_ = nullptr;
  Parameter* bias_ = nullptr;
  Parameter* projection_ = nullptr;
  Direction direction_ = Direction::kForward;
};

class Gru {
 public:
  Gru() = default;
  Gru(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng);

  Var operator()(Var x, Direction dir, RecurrentDropout dropout = {}) const;
  Eigen::Index hidden() const { return recurrent_->value.rows(); }

 private:
  Parameter* input_ = nullptr;
  Parameter* input_bias_ = nullptr;
  Parameter* recurrent_ = nullptr;
  Parameter* recurrent_bias_ = nullptr;
};

class BiGru {
 public:
  BiGru() = default;
  BiGru(ParameterSet& params, const std::string& name, Eigen::Index in, Eigen::Index hidden, Rng& rng);

  Var operator()(Var x, RecurrentDropout dropout = {}) const;
  Eigen::Index out_dim() const { return 2 * forward_.hidden(); }

 private:
  Gru forward_;
  Gru backward_;
};

}  // namespace srlfuse::nn
