#include "newsgraph/autograd/grad_check.hpp"

#include <cmath>

#include "newsgraph/errors.hpp"

namespace newsgraph::autograd {

namespace {

double eval_scalar(const TensorFn& f, const std::vector<Tensor>& inputs) {
  Tape tape;
  const Tensor out = f(tape, inputs);
  if (!out.defined() || out.size() != 1) {
    throw NumericError("grad_check: function must return a scalar");
  }
  const double v = out.item();
  if (!std::isfinite(v)) throw NumericError("grad_check: non-finite function value");
  return v;
}

}  // namespace

double grad_check(const TensorFn& f, const std::vector<Tensor>& inputs, double h,
                  const std::vector<bool>* skip_mask) {
  // Analytic pass. Clear any leftover gradients first so a tensor reused
  // across several checks cannot leak one function's grads into the next.
  std::vector<std::vector<double>> analytic(inputs.size());
  {
    for (Tensor t : inputs)
      if (t.requires_grad()) t.zero_grad();
    Tape tape;
    const Tensor out = f(tape, inputs);
    if (!out.defined() || out.size() != 1) {
      throw NumericError("grad_check: function must return a scalar");
    }
    tape.backward(out);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      if (!inputs[k].requires_grad()) continue;
      if (inputs[k].has_grad()) {
        analytic[k].assign(inputs[k].grad().begin(), inputs[k].grad().end());
      } else {
        analytic[k].assign(inputs[k].size(), 0.0);
      }
      for (double g : analytic[k]) {
        if (!std::isfinite(g)) throw NumericError("grad_check: non-finite analytic gradient");
      }
    }
  }

  double worst = 0.0;
  std::size_t flat = 0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!inputs[k].requires_grad()) continue;
    for (std::size_t i = 0; i < inputs[k].size(); ++i, ++flat) {
      if (skip_mask && flat < skip_mask->size() && (*skip_mask)[flat]) continue;

      std::vector<double> bumped(inputs[k].data().begin(), inputs[k].data().end());
      std::vector<Tensor> probe = inputs;

      bumped[i] += h;
      probe[k] = Tensor::from_data(inputs[k].shape(), bumped, false);
      const double fp = eval_scalar(f, probe);

      bumped[i] -= 2.0 * h;
      probe[k] = Tensor::from_data(inputs[k].shape(), bumped, false);
      const double fm = eval_scalar(f, probe);

      const double numeric = (fp - fm) / (2.0 * h);
      const double a = analytic[k][i];
      const double rel = std::fabs(a - numeric) / std::max(1.0, std::fabs(a));
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

double grad_check(const std::function<Tensor(Tape&, const Tensor&)>& f, const Tensor& x, double h,
                  const std::vector<bool>* skip_mask) {
  return grad_check(
      [&f](Tape& tape, const std::vector<Tensor>& in) { return f(tape, in[0]); }, {x}, h,
      skip_mask);
}

}  // namespace newsgraph::autograd
