#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace srlfuse {

struct TrainSchedule {
  int epochs = 30;
  double learning_rate = 0.01;
  int batch_size = 8;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

struct TrainStats {
  std::vector<double> epoch_loss;  // mean per-example loss
};

// Called after every epoch with (epoch index, mean loss). Returning false
// stops training early.
using EpochCallback = std::function<bool(int, double)>;

}  // namespace srlfuse
