#pragma once

#include <unordered_map>

#include "srlfuse/nn/parameters.hpp"

namespace srlfuse::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 5.0;  // <= 0 disables clipping
};

class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Clips, applies one update to every trainable parameter, then zeroes grads.
  void step(ParameterSet& params);
  long steps() const noexcept { return t_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };
  AdamOptions options_;
  long t_ = 0;
  std::unordered_map<const Parameter*, Moments> state_;
};

}  // namespace srlfuse::nn
