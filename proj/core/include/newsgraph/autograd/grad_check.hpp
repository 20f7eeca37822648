#pragma once

#include <functional>
#include <vector>

#include "newsgraph/autograd/tensor.hpp"

namespace newsgraph::autograd {

// Scalar function of several tensors, evaluated on a caller-provided tape.
using TensorFn = std::function<Tensor(Tape&, const std::vector<Tensor>&)>;

// Compares analytic gradients against central finite differences
// (f(x+h) - f(x-h)) / 2h, coordinate by coordinate, over every input that
// requires a gradient. Returns max |analytic - numeric| / max(1, |analytic|).
//
// skip_mask, when given, parallels the flattened coordinates of all checked
// inputs; true skips that coordinate (use for non-differentiable points such
// as relu at exactly 0). Non-finite values throw NumericError.
double grad_check(const TensorFn& f, const std::vector<Tensor>& inputs, double h = 1e-5,
                  const std::vector<bool>* skip_mask = nullptr);

// Single-input convenience overload.
double grad_check(const std::function<Tensor(Tape&, const Tensor&)>& f, const Tensor& x,
                  double h = 1e-5, const std::vector<bool>* skip_mask = nullptr);

}  // namespace newsgraph::autograd
