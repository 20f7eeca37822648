#pragma once

#include <cstdint>
#include <string>

#include "newsgraph/types.hpp"

namespace newsgraph::model {

// Architecture and training knobs. lookback L means a window covers L+1
// consecutive trading days [t .. t+L] and predicts the movement at t+L+1.
struct ModelConfig {
  int lookback = 20;
  int gnn_dim = 32;
  int lstm_dim = 64;
  int mlp_hidden = 64;
  int gnn_layers = 1;
  int epochs = 30;
  int batch_size = 64;
  double lr = 1e-3;
  std::uint64_t seed = 42;
  Thresholds thresholds;

  void validate() const;  // throws ConfigError

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
};

}  // namespace newsgraph::model
