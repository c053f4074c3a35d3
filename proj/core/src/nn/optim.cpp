#include "srlfuse/nn/optim.hpp"

#include <cmath>

namespace srlfuse::nn {

void Adam::step(ParameterSet& params) {
  params.clip_grad_norm(options_.clip_norm);
  ++t_;
  const double b1t = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double b2t = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (auto* p : params.all()) {
    if (!p->trainable()) continue;
    auto& s = state_[p];
    if (s.m.size() == 0) {
      s.m = Matrix::Zero(p->value.rows(), p->value.cols());
      s.v = Matrix::Zero(p->value.rows(), p->value.cols());
    }
    s.m = options_.beta1 * s.m + (1.0 - options_.beta1) * p->grad;
    s.v = options_.beta2 * s.v + (1.0 - options_.beta2) * p->grad.cwiseAbs2();
    p->value.array() -= options_.learning_rate * (s.m.array() / b1t) / ((s.v.array() / b2t).sqrt() + options_.epsilon);
    p->zero_grad();
  }
}

}  // namespace srlfuse::nn
