#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace smf {

using Vec = std::vector<double>;

// Dense row-major tensor of doubles. Construction and the public operations
// below reject non-finite values, so a Tensor in hand always holds finite
// data.
class Tensor {
 public:
  Tensor() = default;

  // Zero-filled tensor of the given shape. Every dimension must be positive.
  explicit Tensor(std::vector<std::size_t> shape);

  static Tensor from_data(std::vector<std::size_t> shape, std::vector<double> data);
  static Tensor identity(std::size_t n);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-2 element access.
  double& at(std::size_t row, std::size_t col) { return data_[row * shape_[1] + col]; }
  double at(std::size_t row, std::size_t col) const { return data_[row * shape_[1] + col]; }

  std::size_t rows() const { return shape_[0]; }
  std::size_t cols() const { return shape_[1]; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  void fill(double value);
  void zero() { fill(0.0); }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::string shape_str(const std::vector<std::size_t>& shape);

// Throws a numeric error naming `what` if any element is not finite.
void check_finite(const Tensor& t, const std::string& what);
void check_finite(const Vec& v, const std::string& what);

// Standard matrix product for rank-2 tensors with a fixed accumulation order;
// inner dimensions must agree.
Tensor matmul(const Tensor& a, const Tensor& b);

// Elementwise nonlinearities (any rank).
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);

double sigmoid_scalar(double x);

// Vector kernels used by the recurrent layers. All accumulate into `out`,
// iterating in a fixed order so results are reproducible bit-for-bit.
void matvec_acc(const Tensor& w, const Vec& x, Vec& out);    // out += W x
void matvec_t_acc(const Tensor& w, const Vec& x, Vec& out);  // out += W^T x
void outer_acc(const Vec& a, const Vec& b, Tensor& w);       // W += a b^T

}  // namespace smf
