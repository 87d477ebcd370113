#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gcca/dense_matrix.hpp"
#include "gcca/errors.hpp"

namespace gcca {

// Compressed-row sparse matrix. Column indices are strictly increasing
// within each row; duplicate triplets are summed by the builder.
class CsrMatrix {
 public:
  CsrMatrix() : row_ptr_(1, 0) {}
  CsrMatrix(index_t rows, index_t cols)
      : rows_(rows), cols_(cols), row_ptr_(static_cast<size_t>(rows) + 1, 0) {}

  struct Triplet {
    index_t row;
    index_t col;
    double value;
  };

  static CsrMatrix from_triplets(index_t rows, index_t cols, std::vector<Triplet> triplets);
  static CsrMatrix from_dense(const DenseMatrix& a);
  DenseMatrix to_dense() const;

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  index_t nnz() const { return static_cast<index_t>(values_.size()); }
  double density() const {
    return rows_ == 0 || cols_ == 0
               ? 0.0
               : static_cast<double>(nnz()) / (static_cast<double>(rows_) * static_cast<double>(cols_));
  }

  const std::vector<index_t>& row_ptr() const { return row_ptr_; }
  const std::vector<index_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  // checks the strictly-increasing-columns invariant and index ranges
  void validate() const;

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<index_t> row_ptr_;
  std::vector<index_t> col_idx_;
  std::vector<double> values_;
};

// One view X_i with a cached spectral bound on X_i^T X_i.
struct ViewMatrix {
  CsrMatrix matrix;
  std::optional<double> lipschitz;  // lambda_max(X^T X) estimate, inflated 1%
  int id = 0;

  index_t rows() const { return matrix.rows(); }
  index_t cols() const { return matrix.cols(); }

  // Estimates lambda_max(X^T X) by power iteration, inflates it by 1% and
  // caches the result. Returns the cached value on subsequent calls.
  double ensure_lipschitz();
};

struct ViewCollection {
  std::vector<ViewMatrix> views;

  index_t entity_count() const { return views.empty() ? 0 : views.front().rows(); }
  int view_count() const { return static_cast<int>(views.size()); }

  void validate() const {
    if (views.empty()) throw ParameterError("ViewCollection: need at least one view");
    for (const auto& v : views)
      if (v.rows() != views.front().rows())
        throw ShapeError("ViewCollection: views disagree on the entity count L");
  }
};

}  // namespace gcca
