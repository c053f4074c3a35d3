#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "srlfuse/nn/autograd.hpp"
#include "srlfuse/nn/optim.hpp"
#include "srlfuse/training.hpp"

namespace srlfuse::detail {

// Minibatch Adam over `count` examples. `loss_fn(graph, index, rng)` builds
// the loss of one example; gradients are averaged over each batch.
template <typename LossFn>
TrainStats run_training(nn::ParameterSet& params, std::size_t count, const TrainSchedule& schedule, LossFn&& loss_fn,
                        const EpochCallback& on_epoch) {
  TrainStats stats;
  if (schedule.epochs <= 0 || count == 0) return stats;
  nn::Rng rng(schedule.seed);
  nn::AdamOptions opts;
  opts.learning_rate = schedule.learning_rate;
  opts.clip_norm = schedule.clip_norm;
  nn::Adam adam(opts);
  const int batch = std::max(1, schedule.batch_size);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  params.zero_grad();

  auto apply = [&](int in_batch) {
    if (in_batch == 0) return;
    for (auto* p : params.all()) p->grad /= static_cast<double>(in_batch);
    adam.step(params);
  };

  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    if (schedule.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    int in_batch = 0;
    for (std::size_t idx : order) {
      nn::Graph g(true);
      nn::Var loss = loss_fn(g, idx, rng);
      total += loss.value()(0, 0);
      g.backward(loss);
      if (++in_batch == batch) {
        apply(in_batch);
        in_batch = 0;
      }
    }
    apply(in_batch);
    const double mean = total / static_cast<double>(count);
    stats.epoch_loss.push_back(mean);
    if (on_epoch && !on_epoch(epoch, mean)) break;
  }
  return stats;
}

}  // namespace srlfuse::detail
