#pragma once

#include <cstddef>
#include <vector>

#include "newsgraph/autograd/tensor.hpp"

namespace newsgraph::autograd {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moments persist across steps; reset_state()
// restarts them. step() requires every parameter to carry a gradient buffer
// (zero gradients are fine, absent ones are a usage bug).
class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::vector<Tensor> params, AdamConfig cfg = {});

  void step();
  void zero_grad();
  void reset_state();
  std::size_t step_count() const { return t_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig cfg_;
  std::vector<std::vector<double>> m_, v_;
  std::size_t t_ = 0;
};

}  // namespace newsgraph::autograd
