#pragma once

#include <cstddef>
#include <vector>

#include "gcca/errors.hpp"

namespace gcca {

using index_t = std::ptrdiff_t;

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), 0.0) {
    if (rows < 0 || cols < 0) throw ShapeError("DenseMatrix: negative dimension");
  }
  DenseMatrix(index_t rows, index_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<size_t>(rows * cols))
      throw ShapeError("DenseMatrix: data length does not match rows*cols");
  }

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(index_t i, index_t j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
  double operator()(index_t i, index_t j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

  double* row_ptr(index_t i) { return data_.data() + i * cols_; }
  const double* row_ptr(index_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& vec() const { return data_; }

  void set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

  static DenseMatrix identity(index_t n) {
    DenseMatrix out(n, n);
    for (index_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace gcca
