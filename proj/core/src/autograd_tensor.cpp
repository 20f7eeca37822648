#include "newsgraph/autograd/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "newsgraph/errors.hpp"

namespace newsgraph::autograd {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

void require_2d(const Tensor& t, const char* op) {
  if (t.ndim() > 2) {
    throw ShapeError(std::string(op) + ": expected a 1-D or 2-D tensor, got shape " +
                     shape_string(t.shape()));
  }
}

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a.shape()) + " and " +
                   shape_string(b.shape()));
}

}  // namespace

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += " x ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
  const std::size_t n = shape_product(shape);
  return from_data(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value, bool requires_grad) {
  const std::size_t n = shape_product(shape);
  return from_data(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from_data(std::vector<std::size_t> shape, std::vector<double> data,
                         bool requires_grad) {
  if (shape_product(shape) != data.size()) {
    throw ShapeError("tensor data length " + std::to_string(data.size()) +
                     " does not match shape " + shape_string(shape));
  }
  auto impl = std::make_shared<detail::TensorImpl>();
  impl->shape = std::move(shape);
  impl->data = std::move(data);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from_data({1, 1}, {v}, requires_grad);
}

std::size_t Tensor::rows() const {
  if (impl_->shape.empty()) return 1;
  return impl_->shape.size() == 1 ? 1 : impl_->shape[0];
}

std::size_t Tensor::cols() const {
  if (impl_->shape.empty()) return 1;
  return impl_->shape.back();
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item() on non-scalar tensor of shape " + shape_string(shape()));
  }
  return impl_->data[0];
}

double Tensor::at(std::size_t r, std::size_t c) const { return impl_->data[r * cols() + c]; }

Tensor Tape::make(std::vector<std::size_t> shape, std::vector<double> data,
                  const std::vector<Tensor>& inputs,
                  std::function<void(const std::vector<double>&)> backward) {
  bool rg = false;
  for (const auto& in : inputs) rg = rg || in.requires_grad();
  Tensor out = Tensor::from_data(std::move(shape), std::move(data), rg);
  if (rg) nodes_.push_back(Node{out.impl(), std::move(backward)});
  return out;
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  require_2d(a, "matmul");
  require_2d(b, "matmul");
  const std::size_t m = a.rows(), k = a.cols(), k2 = b.rows(), n = b.cols();
  if (k != k2) shape_fail("matmul", a, b);

  std::vector<double> out(m * n, 0.0);
  const auto* pa = a.data().data();
  const auto* pb = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = pa[i * k + kk];
      if (av == 0.0) continue;
      const double* brow = pb + kk * n;
      double* crow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }

  auto ai = a.impl();
  auto bi = b.impl();
  return make({m, n}, std::move(out), {a, b}, [ai, bi, m, k, n](const std::vector<double>& g) {
    if (ai->requires_grad) {
      ai->ensure_grad();
      // dA[i,kk] += sum_j g[i,j] * B[kk,j]
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double* grow = g.data() + i * n;
          const double* brow = bi->data.data() + kk * n;
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ai->grad[i * k + kk] += acc;
        }
      }
    }
    if (bi->requires_grad) {
      bi->ensure_grad();
      // dB[kk,j] += sum_i A[i,kk] * g[i,j]
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = g.data() + i * n;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const double av = ai->data[i * k + kk];
          if (av == 0.0) continue;
          double* brow = bi->grad.data() + kk * n;
          for (std::size_t j = 0; j < n; ++j) brow[j] += av * grow[j];
        }
      }
    }
  });
}

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  require_2d(a, "add");
  require_2d(b, "add");
  const std::size_t m = a.rows(), n = a.cols();
  const bool broadcast = (b.rows() == 1 && m > 1 && b.cols() == n);
  if (!broadcast && (b.rows() != m || b.cols() != n)) shape_fail("add", a, b);

  std::vector<double> out(a.data().begin(), a.data().end());
  const auto* pb = b.data().data();
  if (broadcast) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += pb[j];
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += pb[i];
  }

  auto ai = a.impl();
  auto bi = b.impl();
  return make({m, n}, std::move(out), {a, b},
              [ai, bi, m, n, broadcast](const std::vector<double>& g) {
                if (ai->requires_grad) {
                  ai->ensure_grad();
                  for (std::size_t i = 0; i < g.size(); ++i) ai->grad[i] += g[i];
                }
                if (bi->requires_grad) {
                  bi->ensure_grad();
                  if (broadcast) {
                    for (std::size_t i = 0; i < m; ++i)
                      for (std::size_t j = 0; j < n; ++j) bi->grad[j] += g[i * n + j];
                  } else {
                    for (std::size_t i = 0; i < g.size(); ++i) bi->grad[i] += g[i];
                  }
                }
              });
}

Tensor Tape::mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_fail("mul", a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];

  auto ai = a.impl();
  auto bi = b.impl();
  return make(a.shape(), std::move(out), {a, b}, [ai, bi](const std::vector<double>& g) {
    if (ai->requires_grad) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ai->grad[i] += g[i] * bi->data[i];
    }
    if (bi->requires_grad) {
      bi->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) bi->grad[i] += g[i] * ai->data[i];
    }
  });
}

Tensor Tape::scale(const Tensor& a, double c) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * c;
  auto ai = a.impl();
  return make(a.shape(), std::move(out), {a}, [ai, c](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ai->grad[i] += g[i] * c;
  });
}

Tensor Tape::concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const std::size_t m = parts.front().rows();
  std::size_t total = 0;
  for (const auto& p : parts) {
    require_2d(p, "concat_cols");
    if (p.rows() != m) shape_fail("concat_cols", parts.front(), p);
    total += p.cols();
  }
  std::vector<double> out(m * total);
  std::size_t off = 0;
  for (const auto& p : parts) {
    const std::size_t c = p.cols();
    for (std::size_t i = 0; i < m; ++i) {
      std::copy_n(p.data().data() + i * c, c, out.data() + i * total + off);
    }
    off += c;
  }

  std::vector<std::shared_ptr<detail::TensorImpl>> impls;
  for (const auto& p : parts) impls.push_back(p.impl());
  return make({m, total}, std::move(out), parts, [impls, m, total](const std::vector<double>& g) {
    std::size_t off = 0;
    for (const auto& pi : impls) {
      const std::size_t c = pi->size() / m;
      if (pi->requires_grad) {
        pi->ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < c; ++j) pi->grad[i * c + j] += g[i * total + off + j];
      }
      off += c;
    }
  });
}

Tensor Tape::concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const std::size_t n = parts.front().cols();
  std::size_t total_rows = 0;
  for (const auto& p : parts) {
    require_2d(p, "concat_rows");
    if (p.cols() != n) shape_fail("concat_rows", parts.front(), p);
    total_rows += p.rows();
  }
  std::vector<double> out;
  out.reserve(total_rows * n);
  for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());

  std::vector<std::shared_ptr<detail::TensorImpl>> impls;
  for (const auto& p : parts) impls.push_back(p.impl());
  return make({total_rows, n}, std::move(out), parts, [impls](const std::vector<double>& g) {
    std::size_t off = 0;
    for (const auto& pi : impls) {
      if (pi->requires_grad) {
        pi->ensure_grad();
        for (std::size_t i = 0; i < pi->size(); ++i) pi->grad[i] += g[off + i];
      }
      off += pi->size();
    }
  });
}

Tensor Tape::slice_rows(const Tensor& a, std::size_t r0, std::size_t r1) {
  require_2d(a, "slice_rows");
  const std::size_t m = a.rows(), n = a.cols();
  if (r0 > r1 || r1 > m) {
    throw ShapeError("slice_rows: range [" + std::to_string(r0) + ", " + std::to_string(r1) +
                     ") out of bounds for shape " + shape_string(a.shape()));
  }
  std::vector<double> out(a.data().begin() + static_cast<std::ptrdiff_t>(r0 * n),
                          a.data().begin() + static_cast<std::ptrdiff_t>(r1 * n));
  auto ai = a.impl();
  return make({r1 - r0, n}, std::move(out), {a}, [ai, r0, n](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ai->grad[r0 * n + i] += g[i];
  });
}

Tensor Tape::slice_cols(const Tensor& a, std::size_t c0, std::size_t c1) {
  require_2d(a, "slice_cols");
  const std::size_t m = a.rows(), n = a.cols();
  if (c0 > c1 || c1 > n) {
    throw ShapeError("slice_cols: range [" + std::to_string(c0) + ", " + std::to_string(c1) +
                     ") out of bounds for shape " + shape_string(a.shape()));
  }
  const std::size_t w = c1 - c0;
  std::vector<double> out(m * w);
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(a.data().data() + i * n + c0, w, out.data() + i * w);
  }
  auto ai = a.impl();
  return make({m, w}, std::move(out), {a}, [ai, m, n, c0, w](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < w; ++j) ai->grad[i * n + c0 + j] += g[i * w + j];
  });
}

Tensor Tape::gather_rows(const Tensor& a, std::vector<std::size_t> idx) {
  require_2d(a, "gather_rows");
  const std::size_t m = a.rows(), n = a.cols();
  for (std::size_t r : idx) {
    if (r >= m) {
      throw ShapeError("gather_rows: index " + std::to_string(r) + " out of bounds for shape " +
                       shape_string(a.shape()));
    }
  }
  std::vector<double> out(idx.size() * n);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy_n(a.data().data() + idx[i] * n, n, out.data() + i * n);
  }
  auto ai = a.impl();
  const std::size_t g_rows = idx.size();
  return make({g_rows, n}, std::move(out), {a},
              [ai, idx = std::move(idx), n](const std::vector<double>& g) {
                if (!ai->requires_grad) return;
                ai->ensure_grad();
                for (std::size_t i = 0; i < idx.size(); ++i) {
                  double* dst = ai->grad.data() + idx[i] * n;
                  const double* src = g.data() + i * n;
                  for (std::size_t j = 0; j < n; ++j) dst[j] += src[j];
                }
              });
}

Tensor Tape::mean_rows(const Tensor& a) {
  require_2d(a, "mean_rows");
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0) throw ShapeError("mean_rows: empty tensor");
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j] += a.data()[i * n + j];
  for (auto& v : out) v /= static_cast<double>(m);

  auto ai = a.impl();
  return make({1, n}, std::move(out), {a}, [ai, m, n](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    const double inv = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ai->grad[i * n + j] += g[j] * inv;
  });
}

Tensor Tape::sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  auto ai = a.impl();
  return make({1, 1}, {total}, {a}, [ai](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (auto& gv : ai->grad) gv += g[0];
  });
}

Tensor Tape::sigmoid(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = a.data()[i];
    out[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  auto ai = a.impl();
  Tensor t = make(a.shape(), std::move(out), {a}, nullptr);
  if (t.requires_grad()) {
    auto oi = t.impl();
    nodes_.back().backward = [ai, oi](const std::vector<double>& g) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = oi->data[i];
        ai->grad[i] += g[i] * y * (1.0 - y);
      }
    };
  }
  return t;
}

Tensor Tape::tanh(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a.data()[i]);
  auto ai = a.impl();
  Tensor t = make(a.shape(), std::move(out), {a}, nullptr);
  if (t.requires_grad()) {
    auto oi = t.impl();
    nodes_.back().backward = [ai, oi](const std::vector<double>& g) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = oi->data[i];
        ai->grad[i] += g[i] * (1.0 - y * y);
      }
    };
  }
  return t;
}

Tensor Tape::relu(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] > 0.0 ? a.data()[i] : 0.0;
  auto ai = a.impl();
  return make(a.shape(), std::move(out), {a}, [ai](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (ai->data[i] > 0.0) ai->grad[i] += g[i];
    }
  });
}

Tensor Tape::softmax(const Tensor& a) {
  require_2d(a, "softmax");
  const std::size_t m = a.rows(), n = a.cols();
  if (n == 0) throw ShapeError("softmax: zero columns");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a.data().data() + i * n;
    const double mx = *std::max_element(row, row + n);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      out[i * n + j] = std::exp(row[j] - mx);
      z += out[i * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= z;
  }
  auto ai = a.impl();
  Tensor t = make(a.shape(), std::move(out), {a}, nullptr);
  if (t.requires_grad()) {
    auto oi = t.impl();
    nodes_.back().backward = [ai, oi, m, n](const std::vector<double>& g) {
      ai->ensure_grad();
      for (std::size_t i = 0; i < m; ++i) {
        const double* y = oi->data.data() + i * n;
        const double* gr = g.data() + i * n;
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += gr[j] * y[j];
        for (std::size_t j = 0; j < n; ++j) ai->grad[i * n + j] += y[j] * (gr[j] - dot);
      }
    };
  }
  return t;
}

Tensor Tape::log(const Tensor& a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log(a.data()[i]);
  auto ai = a.impl();
  return make(a.shape(), std::move(out), {a}, [ai](const std::vector<double>& g) {
    if (!ai->requires_grad) return;
    ai->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) ai->grad[i] += g[i] / ai->data[i];
  });
}

Tensor Tape::cross_entropy(const Tensor& logits, const std::vector<int>& targets) {
  require_2d(logits, "cross_entropy");
  const std::size_t b = logits.rows(), c = logits.cols();
  if (b == 0 || c == 0) throw ShapeError("cross_entropy: empty logits");
  if (targets.size() != b) {
    throw ShapeError("cross_entropy: " + std::to_string(b) + " rows but " +
                     std::to_string(targets.size()) + " targets");
  }
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= c) {
      throw std::domain_error("cross_entropy: target " + std::to_string(t) +
                              " out of range for " + std::to_string(c) + " classes");
    }
  }

  auto probs = std::make_shared<std::vector<double>>(b * c);
  double loss = 0.0;
  for (std::size_t i = 0; i < b; ++i) {
    const double* row = logits.data().data() + i * c;
    const double mx = *std::max_element(row, row + c);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      (*probs)[i * c + j] = std::exp(row[j] - mx);
      z += (*probs)[i * c + j];
    }
    for (std::size_t j = 0; j < c; ++j) (*probs)[i * c + j] /= z;
    loss += std::log(z) + mx - row[static_cast<std::size_t>(targets[i])];
  }
  loss /= static_cast<double>(b);

  auto li = logits.impl();
  return make({1, 1}, {loss}, {logits},
              [li, probs, targets, b, c](const std::vector<double>& g) {
                if (!li->requires_grad) return;
                li->ensure_grad();
                const double s = g[0] / static_cast<double>(b);
                for (std::size_t i = 0; i < b; ++i) {
                  for (std::size_t j = 0; j < c; ++j) {
                    double d = (*probs)[i * c + j];
                    if (j == static_cast<std::size_t>(targets[i])) d -= 1.0;
                    li->grad[i * c + j] += s * d;
                  }
                }
              });
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw std::domain_error("backward requires a scalar loss, got shape " +
                            (loss.defined() ? shape_string(loss.shape()) : std::string("<null>")));
  }
  loss.impl()->ensure_grad();
  loss.impl()->grad[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (!it->out->grad.empty() && it->backward) it->backward(it->out->grad);
  }
}

}  // namespace newsgraph::autograd
