#include "newsgraph/autograd/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace newsgraph::autograd {

AdamOptimizer::AdamOptimizer(std::vector<Tensor> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  reset_state();
}

void AdamOptimizer::reset_state() {
  m_.clear();
  v_.clear();
  for (const auto& p : params_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
  t_ = 0;
}

void AdamOptimizer::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void AdamOptimizer::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t pi = 0; pi < params_.size(); ++pi) {
    auto& p = params_[pi];
    if (!p.has_grad()) {
      throw std::logic_error("adam step: parameter " + std::to_string(pi) +
                             " has no gradient (was backward() run?)");
    }
    auto g = p.grad();
    auto data = p.mutable_data();
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (std::size_t i = 0; i < data.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace newsgraph::autograd
