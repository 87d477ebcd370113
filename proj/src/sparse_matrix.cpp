#include "gcca/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "gcca/kernels.hpp"
#include "gcca/rng.hpp"

namespace gcca {

CsrMatrix CsrMatrix::from_triplets(index_t rows, index_t cols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw ShapeError("CsrMatrix: triplet index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix out(rows, cols);
  out.col_idx_.reserve(triplets.size());
  out.values_.reserve(triplets.size());
  size_t i = 0;
  for (index_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      double v = triplets[i].value;
      index_t c = triplets[i].col;
      ++i;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
        v += triplets[i].value;  // duplicates sum
        ++i;
      }
      out.col_idx_.push_back(c);
      out.values_.push_back(v);
    }
    out.row_ptr_[static_cast<size_t>(r) + 1] = static_cast<index_t>(out.values_.size());
  }
  return out;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& a) {
  CsrMatrix out(a.rows(), a.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      double v = a(i, j);
      if (v != 0.0) {
        out.col_idx_.push_back(j);
        out.values_.push_back(v);
      }
    }
    out.row_ptr_[static_cast<size_t>(i) + 1] = static_cast<index_t>(out.values_.size());
  }
  return out;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix out(rows_, cols_);
  for (index_t i = 0; i < rows_; ++i)
    for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out(i, col_idx_[static_cast<size_t>(k)]) += values_[static_cast<size_t>(k)];
  return out;
}

void CsrMatrix::validate() const {
  if (row_ptr_.size() != static_cast<size_t>(rows_) + 1)
    throw ShapeError("CsrMatrix: row pointer length mismatch");
  if (col_idx_.size() != values_.size())
    throw ShapeError("CsrMatrix: nnz mismatch between indices and values");
  for (index_t i = 0; i < rows_; ++i) {
    index_t prev = -1;
    for (index_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      index_t c = col_idx_[static_cast<size_t>(k)];
      if (c <= prev || c >= cols_)
        throw ShapeError("CsrMatrix: column indices not strictly increasing in row");
      if (!std::isfinite(values_[static_cast<size_t>(k)]))
        throw InvariantError("CsrMatrix: non-finite value");
      prev = c;
    }
  }
}

double ViewMatrix::ensure_lipschitz() {
  if (!lipschitz) {
    double est = estimate_lipschitz(*this, 1e-6, 500,
                                    derive_seed(0x4c6970ULL, static_cast<std::uint64_t>(id)));
    lipschitz = 1.01 * est;  // safety margin: power iteration approaches from below
  }
  return *lipschitz;
}

}  // namespace gcca
