#include "core/tensor.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace smf {

namespace {

std::size_t checked_volume(const std::vector<std::size_t>& shape) {
  if (shape.empty()) throw_usage("tensor shape must have at least one dimension");
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d == 0) throw_usage("tensor shape " + shape_str(shape) + " has a zero dimension");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  data_.assign(checked_volume(shape_), 0.0);
}

Tensor Tensor::from_data(std::vector<std::size_t> shape, std::vector<double> data) {
  std::size_t n = checked_volume(shape);
  if (n != data.size()) {
    throw_usage("tensor data length " + std::to_string(data.size()) +
                " does not match shape " + shape_str(shape));
  }
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  check_finite(t, "tensor data");
  return t;
}

Tensor Tensor::identity(std::size_t n) {
  Tensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.at(i, i) = 1.0;
  return t;
}

void Tensor::fill(double value) {
  for (double& v : data_) v = value;
}

std::string shape_str(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

void check_finite(const Tensor& t, const std::string& what) {
  for (double v : t.values()) {
    if (!std::isfinite(v)) throw_numeric("non-finite value in " + what);
  }
}

void check_finite(const Vec& v, const std::string& what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw_numeric("non-finite value in " + what);
  }
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw_usage("matmul requires rank-2 tensors, got " + shape_str(a.shape()) + " and " +
                shape_str(b.shape()));
  }
  if (a.cols() != b.rows()) {
    throw_usage("matmul inner dimensions disagree: " + shape_str(a.shape()) + " vs " +
                shape_str(b.shape()));
  }
  Tensor out({a.rows(), b.cols()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) acc += a.at(i, l) * b.at(l, j);
      out.at(i, j) = acc;
    }
  }
  check_finite(out, "matmul result");
  return out;
}

double sigmoid_scalar(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = sigmoid_scalar(v);
  return out;
}

Tensor tanh(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = std::tanh(v);
  return out;
}

void matvec_acc(const Tensor& w, const Vec& x, Vec& out) {
  if (w.rank() != 2 || w.cols() != x.size() || w.rows() != out.size()) {
    throw_usage("matvec shape mismatch: " + shape_str(w.shape()) + " with input " +
                std::to_string(x.size()) + " and output " + std::to_string(out.size()));
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double acc = 0.0;
    const double* row = w.data() + i * w.cols();
    for (std::size_t j = 0; j < w.cols(); ++j) acc += row[j] * x[j];
    out[i] += acc;
  }
}

void matvec_t_acc(const Tensor& w, const Vec& x, Vec& out) {
  if (w.rank() != 2 || w.rows() != x.size() || w.cols() != out.size()) {
    throw_usage("matvec_t shape mismatch: " + shape_str(w.shape()) + " with input " +
                std::to_string(x.size()) + " and output " + std::to_string(out.size()));
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double* row = w.data() + i * w.cols();
    for (std::size_t j = 0; j < w.cols(); ++j) out[j] += row[j] * x[i];
  }
}

void outer_acc(const Vec& a, const Vec& b, Tensor& w) {
  if (w.rank() != 2 || w.rows() != a.size() || w.cols() != b.size()) {
    throw_usage("outer product shape mismatch: " + shape_str(w.shape()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    double* row = w.data() + i * w.cols();
    for (std::size_t j = 0; j < b.size(); ++j) row[j] += a[i] * b[j];
  }
}

}  // namespace smf
