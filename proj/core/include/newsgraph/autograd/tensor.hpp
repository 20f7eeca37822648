#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace newsgraph::autograd {

namespace detail {

struct TensorImpl {
  std::vector<std::size_t> shape;
  std::vector<double> data;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;

  std::size_t size() const { return data.size(); }
  void ensure_grad() {
    if (grad.empty()) grad.assign(data.size(), 0.0);
  }
};

}  // namespace detail

// Shared-value handle to an immutable-by-convention array of doubles.
// Operations never write to an input's data; gradients accumulate in a
// separate buffer.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> shape, bool requires_grad = false);
  static Tensor full(std::vector<std::size_t> shape, double value, bool requires_grad = false);
  static Tensor from_data(std::vector<std::size_t> shape, std::vector<double> data,
                          bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const std::vector<std::size_t>& shape() const { return impl_->shape; }
  std::size_t size() const { return impl_->data.size(); }
  std::size_t ndim() const { return impl_->shape.size(); }

  // 2-D accessors; a 1-D tensor of n elements reads as [1 x n].
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const double> data() const { return impl_->data; }
  std::span<const double> grad() const { return impl_->grad; }
  bool has_grad() const { return !impl_->grad.empty(); }
  bool requires_grad() const { return impl_->requires_grad; }

  // Direct writes are for parameter initialization and optimizer updates,
  // never for tensors already recorded on a live tape.
  std::span<double> mutable_data() { return impl_->data; }

  void zero_grad() {
    if (!impl_->grad.empty()) impl_->grad.assign(impl_->data.size(), 0.0);
  }

  double item() const;
  double at(std::size_t r, std::size_t c) const;

  std::shared_ptr<detail::TensorImpl> impl() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<detail::TensorImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<detail::TensorImpl> impl_;
};

std::string shape_string(const std::vector<std::size_t>& shape);

// Reverse-mode tape. Records one node per primitive whose output needs a
// gradient; backward() walks the record once, in reverse creation order.
// Single-threaded; distinct tapes may live on distinct threads.
class Tape {
 public:
  // -- primitives -------------------------------------------------------
  Tensor matmul(const Tensor& a, const Tensor& b);
  // Same-shape addition, or broadcast of a [1 x n] row over an [m x n] matrix.
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);  // elementwise, same shape
  Tensor scale(const Tensor& a, double c);
  Tensor concat_cols(const std::vector<Tensor>& parts);
  Tensor concat_rows(const std::vector<Tensor>& parts);
  Tensor slice_rows(const Tensor& a, std::size_t r0, std::size_t r1);
  Tensor slice_cols(const Tensor& a, std::size_t c0, std::size_t c1);
  Tensor gather_rows(const Tensor& a, std::vector<std::size_t> idx);
  Tensor mean_rows(const Tensor& a);  // [m x n] -> [1 x n]
  Tensor sum(const Tensor& a);        // -> [1 x 1]
  Tensor sigmoid(const Tensor& a);
  Tensor tanh(const Tensor& a);
  Tensor relu(const Tensor& a);  // subgradient at 0 is 0
  Tensor softmax(const Tensor& a);  // row-wise
  Tensor log(const Tensor& a);

  // Mean over the batch of -log softmax(logits)[target]; max-subtracted for
  // stability. logits [B x C], targets in [0, C). Out-of-range target throws
  // std::domain_error.
  Tensor cross_entropy(const Tensor& logits, const std::vector<int>& targets);

  // Seeds d(loss)/d(loss) = 1 and accumulates into .grad() of every
  // requires_grad tensor reachable from loss. Throws std::domain_error if
  // loss is not scalar.
  void backward(const Tensor& loss);

  std::size_t node_count() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    std::shared_ptr<detail::TensorImpl> out;
    std::function<void(const std::vector<double>& out_grad)> backward;
  };

  Tensor make(std::vector<std::size_t> shape, std::vector<double> data,
              const std::vector<Tensor>& inputs,
              std::function<void(const std::vector<double>&)> backward);

  std::vector<Node> nodes_;
};

}  // namespace newsgraph::autograd
